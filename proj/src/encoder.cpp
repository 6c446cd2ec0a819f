#include "attackmap/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "attackmap/random.hpp"
#include "text_util.hpp"

namespace attackmap {

std::string_view mode_name(TargetMode m) { return m == TargetMode::Scalar ? "scalar" : "onehot"; }

std::optional<TargetMode> mode_from_name(std::string_view name) {
  if (name == "scalar") return TargetMode::Scalar;
  if (name == "onehot") return TargetMode::OneHot;
  return std::nullopt;
}

void Dataset::add(const FeatureRow& row, std::span<const double> target) {
  if (target.size() != target_width()) {
    throw Error("target has " + std::to_string(target.size()) + " values, " +
                std::string(mode_name(mode_)) + " mode needs " + std::to_string(target_width()));
  }
  for (double v : row) {
    if (!std::isfinite(v)) throw Error("non-finite feature value");
  }
  if (mode_ == TargetMode::Scalar) {
    const double g = target[0];
    if (!(g >= 1.0 && g <= kGroupCount) || g != std::floor(g)) {
      throw Error("scalar target must be an integer group id 1..6, got " + detail::format_shortest(g));
    }
  } else {
    double sum = 0.0;
    for (double v : target) {
      if (v != 0.0 && v != 1.0) throw Error("one-hot target entries must be 0 or 1");
      sum += v;
    }
    if (sum != 1.0) throw Error("one-hot target must contain exactly one 1");
  }
  rows_.push_back(row);
  targets_.insert(targets_.end(), target.begin(), target.end());
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out(mode_);
  out.rows_.reserve(indices.size());
  out.targets_.reserve(indices.size() * target_width());
  for (auto i : indices) {
    out.rows_.push_back(rows_.at(i));
    const auto t = target(i);
    out.targets_.insert(out.targets_.end(), t.begin(), t.end());
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<RawSample> enumerate_samples(const Catalog& catalog) {
  std::vector<const AttackPatternRecord*> ordered;
  for (const auto& p : catalog.patterns()) ordered.push_back(&p);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](auto* a, auto* b) { return a->attack_id < b->attack_id; });

  std::vector<RawSample> samples;
  for (const auto* p : ordered) {
    for (const auto& path : p->paths) {
      for (auto category : p->categories) {  // already sorted by group id
        samples.push_back({p->attack_id, path.resource, path.vector, path.type, group_id(category)});
      }
    }
  }
  return samples;
}

FeatureRow encode_sample(const RawSample& raw, const ComponentRegistry& registry, bool keep_attack_id) {
  return {keep_attack_id ? static_cast<double>(raw.attack_id) : 0.0,
          static_cast<double>(registry.id_of(raw.resource)),
          static_cast<double>(registry.id_of(raw.vector)),
          static_cast<double>(type_value(raw.type))};
}

std::vector<double> encode_target(int group_id, TargetMode mode) {
  stride_from_group(group_id);
  if (mode == TargetMode::Scalar) return {static_cast<double>(group_id)};
  std::vector<double> onehot(kGroupCount, 0.0);
  onehot[group_id - 1] = 1.0;
  return onehot;
}

int decode_output(std::span<const double> output, TargetMode mode) {
  if (output.size() != target_width(mode)) {
    throw Error("network output has " + std::to_string(output.size()) + " values, expected " +
                std::to_string(target_width(mode)));
  }
  for (double v : output) {
    if (!std::isfinite(v)) throw Error("non-finite network output");
  }
  if (mode == TargetMode::Scalar) {
    const double r = std::round(output[0]);  // halves away from zero
    return static_cast<int>(std::clamp(r, 1.0, static_cast<double>(kGroupCount)));
  }
  const auto it = std::max_element(output.begin(), output.end());  // first maximum
  return static_cast<int>(it - output.begin()) + 1;
}

Dataset build_dataset(const Catalog& catalog, TargetMode mode, bool keep_attack_id) {
  Dataset dataset(mode);
  for (const auto& raw : enumerate_samples(catalog)) {
    dataset.add(encode_sample(raw, catalog.registry(), keep_attack_id),
                encode_target(raw.target_group, mode));
  }
  return dataset;
}

// ---------------------------------------------------------------------------

std::string write_csv(const Dataset& dataset, bool header) {
  std::string out;
  if (header) {
    out += "attack_id,resource,vector,type";
    if (dataset.mode() == TargetMode::Scalar) {
      out += ",group";
    } else {
      for (int g = 1; g <= kGroupCount; ++g) out += ",o" + std::to_string(g);
    }
    out += '\n';
  }
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    bool first = true;
    const auto emit = [&](double v) {
      if (!first) out += ',';
      out += detail::format_shortest(v);
      first = false;
    };
    for (double v : dataset.row(i)) emit(v);
    for (double v : dataset.target(i)) emit(v);
    out += '\n';
  }
  return out;
}

Dataset read_csv(std::string_view text, TargetMode mode, bool header) {
  Dataset dataset(mode);
  const std::size_t columns = kFeatureCount + target_width(mode);
  std::size_t lineno = 0;
  bool skip_header = header;
  std::vector<double> values(columns);
  for (auto raw : detail::lines(text)) {
    ++lineno;
    const auto line = detail::trim(raw);
    if (line.empty()) continue;
    if (skip_header) {
      skip_header = false;
      continue;
    }
    const auto prefix = "line " + std::to_string(lineno) + ": ";
    const auto fields = detail::split(line, ',');
    if (fields.size() != columns) {
      throw ParseError(prefix + "expected " + std::to_string(columns) + " columns in " +
                           std::string(mode_name(mode)) + " mode, found " + std::to_string(fields.size()),
                       lineno);
    }
    for (std::size_t c = 0; c < columns; ++c) {
      if (!detail::parse_double(fields[c], values[c])) {
        throw ParseError(prefix + "non-numeric value '" + std::string(detail::trim(fields[c])) + "'", lineno);
      }
    }
    FeatureRow row;
    std::copy_n(values.begin(), kFeatureCount, row.begin());
    try {
      dataset.add(row, std::span<const double>(values).subspan(kFeatureCount));
    } catch (const Error& e) {
      throw ParseError(prefix + e.what(), lineno);
    }
  }
  return dataset;
}

// ---------------------------------------------------------------------------

FeatureRow NormalizationParams::apply(const FeatureRow& row) const {
  FeatureRow out{};
  for (std::size_t c = 0; c < kFeatureCount; ++c) {
    const auto& r = columns[c];
    out[c] = r.max > r.min ? 2.0 * (row[c] - r.min) / (r.max - r.min) - 1.0 : 0.0;
  }
  return out;
}

FeatureRow NormalizationParams::invert(const FeatureRow& row) const {
  FeatureRow out{};
  for (std::size_t c = 0; c < kFeatureCount; ++c) {
    const auto& r = columns[c];
    out[c] = r.max > r.min ? (row[c] + 1.0) * 0.5 * (r.max - r.min) + r.min : r.min;
  }
  return out;
}

NormalizationParams fit_normalization(const Dataset& dataset) {
  if (dataset.empty()) throw Error("cannot normalize an empty dataset");
  NormalizationParams params;
  for (std::size_t c = 0; c < kFeatureCount; ++c) {
    params.columns[c] = {dataset.row(0)[c], dataset.row(0)[c]};
  }
  for (const auto& row : dataset.rows()) {
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      params.columns[c].min = std::min(params.columns[c].min, row[c]);
      params.columns[c].max = std::max(params.columns[c].max, row[c]);
    }
  }
  return params;
}

Dataset apply_normalization(const Dataset& dataset, const NormalizationParams& params) {
  Dataset out(dataset.mode());
  for (std::size_t i = 0; i < dataset.size(); ++i) out.add(params.apply(dataset.row(i)), dataset.target(i));
  return out;
}

std::pair<Dataset, NormalizationParams> normalize(const Dataset& dataset) {
  auto params = fit_normalization(dataset);
  return {apply_normalization(dataset, params), params};
}

std::string write_normalization(const NormalizationParams& params) {
  std::string out;
  for (std::size_t c = 0; c < kFeatureCount; ++c) {
    out += std::to_string(c) + ',' + detail::format_17g(params.columns[c].min) + ',' +
           detail::format_17g(params.columns[c].max) + '\n';
  }
  return out;
}

NormalizationParams read_normalization(std::string_view text) {
  NormalizationParams params;
  std::array<bool, kFeatureCount> seen{};
  std::size_t lineno = 0;
  for (auto raw : detail::lines(text)) {
    ++lineno;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto prefix = "line " + std::to_string(lineno) + ": ";
    const auto fields = detail::split(line, ',');
    long long column = 0;
    double lo = 0.0;
    double hi = 0.0;
    if (fields.size() != 3 || !detail::parse_int(fields[0], column) || !detail::parse_double(fields[1], lo) ||
        !detail::parse_double(fields[2], hi)) {
      throw ParseError(prefix + "expected 'column,min,max'", lineno);
    }
    if (column < 0 || column >= static_cast<long long>(kFeatureCount)) {
      throw ParseError(prefix + "column index out of range", lineno);
    }
    if (lo > hi) throw ParseError(prefix + "min exceeds max", lineno);
    if (seen[column]) throw ParseError(prefix + "duplicate column", lineno);
    seen[column] = true;
    params.columns[column] = {lo, hi};
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error("normalization parameters must cover all " + std::to_string(kFeatureCount) + " columns");
  }
  return params;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t n_pick, std::uint64_t seed) {
  if (n_pick > n) {
    throw Error("cannot pick " + std::to_string(n_pick) + " of " + std::to_string(n) + " rows");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first n_pick slots are a uniform subset.
  for (std::size_t i = 0; i < n_pick; ++i) {
    std::swap(perm[i], perm[i + rng.index(n - i)]);
  }
  perm.resize(n_pick);
  std::sort(perm.begin(), perm.end());
  return perm;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, std::size_t n_test, std::uint64_t seed) {
  if (n_test > dataset.size()) {
    throw Error("n_test " + std::to_string(n_test) + " exceeds dataset size " + std::to_string(dataset.size()));
  }
  const auto test_idx = sample_indices(dataset.size(), n_test, seed);
  std::vector<std::size_t> train_idx;
  train_idx.reserve(dataset.size() - n_test);
  std::size_t k = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (k < test_idx.size() && test_idx[k] == i) {
      ++k;
    } else {
      train_idx.push_back(i);
    }
  }
  return {dataset.subset(train_idx), dataset.subset(test_idx)};
}

}  // namespace attackmap
