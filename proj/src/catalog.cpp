#include "attackmap/catalog.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "text_util.hpp"

namespace attackmap {

namespace {

std::string line_prefix(std::size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

Stride stride_from_group(int id) {
  if (id < 1 || id > kGroupCount) {
    throw Error("group id " + std::to_string(id) + " outside 1..6");
  }
  return static_cast<Stride>(id);
}

char stride_letter(Stride s) { return "STRIDE"[group_id(s) - 1]; }

std::optional<Stride> stride_from_letter(char c) {
  switch (c) {
    case 'S': return Stride::Spoofing;
    case 'T': return Stride::Tampering;
    case 'R': return Stride::Repudiation;
    case 'I': return Stride::InformationDisclosure;
    case 'D': return Stride::DenialOfService;
    case 'E': return Stride::ElevationOfPrivilege;
    default: return std::nullopt;
  }
}

std::string_view stride_name(Stride s) {
  switch (s) {
    case Stride::Spoofing: return "Spoofing";
    case Stride::Tampering: return "Tampering";
    case Stride::Repudiation: return "Repudiation";
    case Stride::InformationDisclosure: return "Information disclosure";
    case Stride::DenialOfService: return "Denial of service";
    case Stride::ElevationOfPrivilege: return "Elevation of privilege";
  }
  return "?";
}

char attack_type_letter(AttackType t) { return "AIC"[type_value(t) - 1]; }

std::optional<AttackType> attack_type_from_letter(char c) {
  switch (c) {
    case 'A': return AttackType::Availability;
    case 'I': return AttackType::Integrity;
    case 'C': return AttackType::Confidentiality;
    default: return std::nullopt;
  }
}

std::string_view source_name(PatternSource s) {
  switch (s) {
    case PatternSource::Steel2005: return "Steel2005";
    case PatternSource::Blakley2004: return "Blakley2004";
    case PatternSource::KienzleElder2003: return "KienzleElder2003";
  }
  return "?";
}

std::optional<PatternSource> source_from_name(std::string_view name) {
  for (auto s : {PatternSource::Steel2005, PatternSource::Blakley2004,
                 PatternSource::KienzleElder2003}) {
    if (source_name(s) == name) return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

void ComponentRegistry::add(std::string name, int id) {
  if (name.empty()) throw Error("component name must not be empty");
  if (id < 1) throw Error("component '" + name + "' has non-positive id " + std::to_string(id));
  for (const auto& e : entries_) {
    if (e.name == name) throw Error("duplicate component name '" + name + "'");
    if (e.id == id) {
      throw Error("duplicate component id " + std::to_string(id) + " ('" + e.name + "' and '" +
                  name + "')");
    }
  }
  entries_.push_back({std::move(name), id});
}

std::optional<int> ComponentRegistry::find(std::string_view name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e.id;
  }
  return std::nullopt;
}

int ComponentRegistry::id_of(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw Error("unknown component '" + std::string(name) + "'");
}

ComponentRegistry load_registry(std::string_view text) {
  ComponentRegistry registry;
  std::size_t lineno = 0;
  for (auto raw : detail::lines(text)) {
    ++lineno;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != 2) {
      throw ParseError(line_prefix(lineno) + "expected 'name,id'", lineno);
    }
    const auto name = detail::trim(fields[0]);
    long long id = 0;
    if (name.empty()) throw ParseError(line_prefix(lineno) + "missing component name", lineno);
    if (!detail::parse_int(fields[1], id) || id < 1 || id > 1'000'000'000) {
      throw ParseError(line_prefix(lineno) + "invalid component id '" +
                           std::string(detail::trim(fields[1])) + "'",
                       lineno);
    }
    try {
      registry.add(std::string(name), static_cast<int>(id));
    } catch (const Error& e) {
      throw ParseError(line_prefix(lineno) + e.what(), lineno);
    }
  }
  return registry;
}

// ---------------------------------------------------------------------------

Catalog::Catalog(std::vector<AttackPatternRecord> patterns, std::vector<SecurityPatternGroup> groups,
                 ComponentRegistry registry)
    : patterns_(std::move(patterns)), registry_(std::move(registry)) {
  if (groups.size() != kGroupCount) {
    throw Error("exactly 6 security-pattern groups required, got " + std::to_string(groups.size()));
  }
  std::array<bool, kGroupCount> seen{};
  for (auto& g : groups) {
    const Stride expected = stride_from_group(g.group_id);
    if (g.category != expected) {
      throw Error("group " + std::to_string(g.group_id) + " must hold category " +
                  std::string(stride_name(expected)));
    }
    if (seen[g.group_id - 1]) throw Error("duplicate group " + std::to_string(g.group_id));
    seen[g.group_id - 1] = true;
    std::set<std::pair<std::string, PatternSource>> members;
    for (const auto& m : g.members) {
      if (m.name.empty()) throw Error("empty security pattern name in group " + std::to_string(g.group_id));
      if (!members.emplace(m.name, m.source).second) {
        throw Error("duplicate member '" + m.name + "' in group " + std::to_string(g.group_id));
      }
    }
    groups_[g.group_id - 1] = std::move(g);
  }

  std::set<int> ids;
  for (auto& p : patterns_) {
    const std::string label = "pattern " + std::to_string(p.attack_id);
    if (p.attack_id < 1) throw Error(label + ": attack id must be positive");
    if (!ids.insert(p.attack_id).second) throw Error("duplicate attack id " + std::to_string(p.attack_id));
    if (p.expr.steps.empty()) throw Error(label + ": empty pattern expression");
    for (const auto& step : p.expr.steps) {
      if (step.component.empty()) throw Error(label + ": empty component name");
      if (!registry_.contains(step.component)) {
        throw Error(label + ": unresolved component '" + step.component + "'");
      }
    }
    std::sort(p.categories.begin(), p.categories.end());
    p.categories.erase(std::unique(p.categories.begin(), p.categories.end()), p.categories.end());
    if (p.categories.empty()) throw Error(label + ": no STRIDE category");
    if (p.paths.empty()) throw Error(label + ": no attack path");
    const auto in_expr = [&](const std::string& name) {
      return std::any_of(p.expr.steps.begin(), p.expr.steps.end(),
                         [&](const PatternStep& s) { return s.component == name; });
    };
    for (const auto& path : p.paths) {
      for (const auto* name : {&path.resource, &path.vector}) {
        if (!in_expr(*name)) {
          throw Error(label + ": path component '" + *name + "' does not appear in " +
                      render_pattern(p.expr));
        }
      }
    }
  }
}

const std::vector<SecurityPattern>& Catalog::group_members(int group_id) const {
  stride_from_group(group_id);
  return groups_[group_id - 1].members;
}

// ---------------------------------------------------------------------------

Catalog load_catalog(std::string_view text, ComponentRegistry registry) {
  std::vector<AttackPatternRecord> patterns;
  std::vector<SecurityPatternGroup> groups;
  std::vector<std::size_t> pattern_lines;

  enum class Block { None, Pattern, Group } block = Block::None;
  bool have_regex = false;
  bool have_stride = false;
  std::size_t lineno = 0;

  const auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(line_prefix(lineno) + msg, lineno);
  };
  const auto close_pattern = [&] {
    if (block != Block::Pattern) return;
    const auto& p = patterns.back();
    const std::string label = "pattern " + std::to_string(p.attack_id);
    if (!have_regex) throw fail(label + " has no regex");
    if (!have_stride) throw fail(label + " has no stride");
    if (p.paths.empty()) throw fail(label + " has no path");
  };

  for (auto raw : detail::lines(text)) {
    ++lineno;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw fail("expected 'key: value'");
    const auto key = detail::trim(line.substr(0, colon));
    const auto value = detail::trim(line.substr(colon + 1));

    if (key == "pattern") {
      close_pattern();
      long long id = 0;
      if (!detail::parse_int(value, id) || id < 1 || id > 1'000'000'000) {
        throw fail("invalid attack id '" + std::string(value) + "'");
      }
      patterns.push_back({});
      patterns.back().attack_id = static_cast<int>(id);
      pattern_lines.push_back(lineno);
      block = Block::Pattern;
      have_regex = have_stride = false;
    } else if (key == "group") {
      close_pattern();
      long long id = 0;
      if (!detail::parse_int(value, id) || id < 1 || id > kGroupCount) {
        throw fail("group id must be 1..6, got '" + std::string(value) + "'");
      }
      SecurityPatternGroup g;
      g.group_id = static_cast<int>(id);
      g.category = stride_from_group(g.group_id);
      groups.push_back(std::move(g));
      block = Block::Group;
    } else if (key == "regex" || key == "stride" || key == "path") {
      if (block != Block::Pattern) throw fail("'" + std::string(key) + "' outside a pattern block");
      auto& p = patterns.back();
      if (key == "regex") {
        if (have_regex) throw fail("duplicate regex");
        try {
          p.expr = parse_pattern(value);
        } catch (const ParseError& e) {
          throw fail(e.what());
        }
        have_regex = true;
      } else if (key == "stride") {
        if (have_stride) throw fail("duplicate stride");
        if (value.empty()) throw fail("empty stride");
        for (char c : value) {
          const auto s = stride_from_letter(c);
          if (!s) throw fail(std::string("invalid STRIDE letter '") + c + "'");
          if (std::find(p.categories.begin(), p.categories.end(), *s) != p.categories.end()) {
            throw fail(std::string("repeated STRIDE letter '") + c + "'");
          }
          p.categories.push_back(*s);
        }
        have_stride = true;
      } else {
        const auto fields = detail::split(value, ',');
        if (fields.size() != 3) throw fail("expected 'path: resource,vector,A|I|C'");
        const auto type_field = detail::trim(fields[2]);
        const auto type = type_field.size() == 1 ? attack_type_from_letter(type_field[0]) : std::nullopt;
        if (!type) throw fail("invalid attack type '" + std::string(type_field) + "'");
        AttackPath path{std::string(detail::trim(fields[0])), std::string(detail::trim(fields[1])), *type};
        if (path.resource.empty() || path.vector.empty()) throw fail("empty path component");
        p.paths.push_back(std::move(path));
      }
    } else if (key == "member") {
      if (block != Block::Group) throw fail("'member' outside a group block");
      const auto comma = value.rfind(',');
      if (comma == std::string_view::npos) throw fail("expected 'member: name,source'");
      const auto name = detail::trim(value.substr(0, comma));
      const auto source_text = detail::trim(value.substr(comma + 1));
      const auto source = source_from_name(source_text);
      if (!source) throw fail("unknown pattern source '" + std::string(source_text) + "'");
      if (name.empty()) throw fail("empty security pattern name");
      groups.back().members.push_back({std::string(name), *source});
    } else {
      throw fail("unknown key '" + std::string(key) + "'");
    }
  }
  close_pattern();

  // Report record-level violations against the line that opened the record.
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    for (const auto& step : patterns[i].expr.steps) {
      if (!registry.contains(step.component)) {
        lineno = pattern_lines[i];
        throw fail("pattern " + std::to_string(patterns[i].attack_id) + ": unresolved component '" +
                   step.component + "'");
      }
    }
  }
  return Catalog(std::move(patterns), std::move(groups), std::move(registry));
}

StrideHistogram stride_histogram(const Catalog& catalog) {
  StrideHistogram counts{};
  for (const auto& p : catalog.patterns()) {
    for (auto s : p.categories) ++counts[group_id(s) - 1];
  }
  return counts;
}

}  // namespace attackmap
