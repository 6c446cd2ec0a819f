#include <string>

#include "attackmap/catalog.hpp"

namespace attackmap {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t'; }

std::string at(std::size_t pos) { return " at offset " + std::to_string(pos); }

}  // namespace

AttackPatternExpr parse_pattern(std::string_view text) {
  AttackPatternExpr expr;
  std::size_t i = 0;
  const auto skip_space = [&] {
    while (i < text.size() && is_space(text[i])) ++i;
  };

  skip_space();
  if (i == text.size()) throw ParseError("empty attack pattern", i);

  while (i < text.size()) {
    if (text[i] != '(') {
      throw ParseError(std::string("expected '(' but found '") + text[i] + "'" + at(i), i);
    }
    const std::size_t open = i++;
    const std::size_t name_start = i;
    while (i < text.size() && text[i] != ')' && text[i] != '(' && text[i] != '+') ++i;
    const std::size_t name_end = i;

    Quantifier q = Quantifier::One;
    if (i < text.size() && text[i] == '+') {
      q = Quantifier::OneOrMore;
      ++i;
    }
    if (i >= text.size()) throw ParseError("unbalanced '('" + at(open), open);
    if (text[i] != ')') {
      throw ParseError(std::string("unexpected '") + text[i] + "' inside term" + at(i), i);
    }

    auto name = text.substr(name_start, name_end - name_start);
    while (!name.empty() && is_space(name.front())) name.remove_prefix(1);
    while (!name.empty() && is_space(name.back())) name.remove_suffix(1);
    if (name.empty()) throw ParseError("empty component name" + at(name_start), name_start);
    for (std::size_t k = 0; k < name.size(); ++k) {
      if (is_space(name[k])) {
        const std::size_t pos = static_cast<std::size_t>(name.data() - text.data()) + k;
        throw ParseError("whitespace inside component name" + at(pos), pos);
      }
    }

    expr.steps.push_back({std::string(name), q});
    ++i;  // ')'
    skip_space();
  }
  return expr;
}

std::string render_pattern(const AttackPatternExpr& expr) {
  std::string out;
  for (const auto& step : expr.steps) {
    out += '(';
    out += step.component;
    if (step.quantifier == Quantifier::OneOrMore) out += '+';
    out += ')';
  }
  return out;
}

}  // namespace attackmap
