#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "attackmap/catalog.hpp"

namespace attackmap {

inline constexpr std::size_t kFeatureCount = 4;

/// [attack_id, resource_id, vector_id, type_value]
using FeatureRow = std::array<double, kFeatureCount>;

enum class TargetMode { Scalar, OneHot };

constexpr std::size_t target_width(TargetMode m) { return m == TargetMode::Scalar ? 1 : kGroupCount; }
std::string_view mode_name(TargetMode m);
std::optional<TargetMode> mode_from_name(std::string_view name);

/// One (pattern, path, category) combination before encoding.
struct RawSample {
  int attack_id = 0;
  std::string resource;
  std::string vector;
  AttackType type = AttackType::Availability;
  int target_group = 1;

  bool operator==(const RawSample&) const = default;
};

/// Feature rows with targets of a single mode. Targets are stored flat,
/// target_width(mode) values per row. Scalar targets are integers 1..6;
/// one-hot targets have entries in {0,1} summing to 1.
class Dataset {
 public:
  explicit Dataset(TargetMode mode = TargetMode::Scalar) : mode_(mode) {}

  /// Throws Error if the target violates the mode's invariant.
  void add(const FeatureRow& row, std::span<const double> target);

  TargetMode mode() const { return mode_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  std::size_t target_width() const { return attackmap::target_width(mode_); }

  const std::vector<FeatureRow>& rows() const { return rows_; }
  const FeatureRow& row(std::size_t i) const { return rows_[i]; }
  std::span<const double> target(std::size_t i) const {
    return {targets_.data() + i * target_width(), target_width()};
  }
  /// All targets, row-major.
  std::span<const double> targets() const { return targets_; }

  /// Rows in the given order (indices must be < size()).
  Dataset subset(std::span<const std::size_t> indices) const;

  bool operator==(const Dataset&) const = default;

 private:
  TargetMode mode_;
  std::vector<FeatureRow> rows_;
  std::vector<double> targets_;
};

/// Deterministic: by attack_id, then path order, then group ID.
std::vector<RawSample> enumerate_samples(const Catalog& catalog);

/// Throws Error on an unregistered component. With keep_attack_id=false the
/// first feature is written as 0, which the network then ignores.
FeatureRow encode_sample(const RawSample& raw, const ComponentRegistry& registry,
                         bool keep_attack_id = true);

/// Scalar: {group_id}. OneHot: 6 entries with a 1 at group_id - 1.
std::vector<double> encode_target(int group_id, TargetMode mode);

/// Scalar: nearest integer (halves away from zero) clamped to 1..6.
/// OneHot: 1 + index of the largest entry, lowest index on ties.
/// Throws Error on non-finite values or a wrong output width.
int decode_output(std::span<const double> output, TargetMode mode);

/// enumerate_samples + encode_sample + encode_target over a whole catalog.
Dataset build_dataset(const Catalog& catalog, TargetMode mode, bool keep_attack_id = true);

// ---------------------------------------------------------------------------
// CSV: `a,r,v,t,g` (Scalar) or `a,r,v,t,o1,...,o6` (OneHot), LF endings.

std::string write_csv(const Dataset& dataset, bool header = false);

/// Throws ParseError with the 1-based line number on malformed rows.
Dataset read_csv(std::string_view text, TargetMode mode, bool header = false);

// ---------------------------------------------------------------------------

struct ColumnRange {
  double min = 0.0;
  double max = 0.0;

  bool operator==(const ColumnRange&) const = default;
};

/// Per-column min/max used to map inputs affinely onto [-1, 1].
struct NormalizationParams {
  std::array<ColumnRange, kFeatureCount> columns{};

  /// 2(x - min)/(max - min) - 1; a constant column maps to 0.
  FeatureRow apply(const FeatureRow& row) const;
  /// Inverse of apply for non-constant columns; constant columns return min.
  FeatureRow invert(const FeatureRow& row) const;

  bool operator==(const NormalizationParams&) const = default;
};

/// Throws Error on an empty dataset.
NormalizationParams fit_normalization(const Dataset& dataset);
Dataset apply_normalization(const Dataset& dataset, const NormalizationParams& params);
std::pair<Dataset, NormalizationParams> normalize(const Dataset& dataset);

/// `column,min,max` per line.
std::string write_normalization(const NormalizationParams& params);
NormalizationParams read_normalization(std::string_view text);

// ---------------------------------------------------------------------------

/// Indices of a uniformly random n_test-subset, ascending. Seed-deterministic.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t n_pick, std::uint64_t seed);

/// (train, test) with |test| = n_test; both keep the original row order.
/// Throws Error if n_test > dataset.size().
std::pair<Dataset, Dataset> split(const Dataset& dataset, std::size_t n_test, std::uint64_t seed);

}  // namespace attackmap
