#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "attackmap/catalog.hpp"
#include "attackmap/encoder.hpp"
#include "attackmap/model.hpp"
#include "attackmap/neuralnet.hpp"

namespace attackmap {

enum class ReportFormat { Text, Csv };

/// Normalizes (optionally), initialises a mode-appropriate network from
/// config.seed and trains it. The returned model carries its scaling.
std::pair<Model, TrainLog> train_model(const Dataset& train_set, std::size_t hidden, const TrainConfig& config,
                                       bool normalize_inputs = true);

// ---------------------------------------------------------------------------
// Actual vs expected outputs on a test set.

struct EvalRow {
  std::size_t sample_index = 0;  // 1-based, test-set order
  std::vector<double> actual;
  int expected_group = 0;
  int decoded_group = 0;
  bool match = false;
};

struct EvalTable {
  TargetMode mode = TargetMode::Scalar;
  std::vector<EvalRow> rows;

  std::size_t matches() const;
  /// matches / rows; 0 for an empty table.
  double accuracy() const;
};

/// `test_set` holds raw (unnormalized) features; the model applies its own
/// scaling. Throws Error on an empty set or a mode mismatch.
EvalTable evaluate(const Model& model, const Dataset& test_set);

/// Text mirrors the actual-vs-expected table; `max_rows` truncates the listing
/// (accuracy still covers every row).
std::string format_eval_table(const EvalTable& table, ReportFormat format,
                              std::optional<std::size_t> max_rows = std::nullopt);

// ---------------------------------------------------------------------------
// Hidden-neuron sweep.

struct SweepRun {
  std::size_t hidden = 0;
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  double final_train_mse = 0.0;
  double final_val_mse = 0.0;
  std::size_t epochs_used = 0;
  double wall_seconds = 0.0;
  StopReason stop_reason = StopReason::MaxEpochs;
};

struct SweepRow {
  std::size_t hidden = 0;
  double mean_mse = 0.0;
  double mean_epochs = 0.0;
  double mean_seconds = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // one per requested neuron count, in request order
  std::vector<SweepRun> runs;  // every individual run, grouped by neuron count
};

struct SweepOptions {
  bool normalize_inputs = true;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Trains `runs` networks per neuron count; run r uses seed master_seed + r
/// for both its initial weights and its validation hold-out. Metrics other
/// than wall time do not depend on thread count or scheduling.
SweepReport run_sweep(const Dataset& dataset, std::span<const std::size_t> neuron_counts, std::size_t runs,
                      const TrainConfig& config, std::uint64_t master_seed, const SweepOptions& options = {});

std::string format_sweep_report(const SweepReport& report, ReportFormat format);

// ---------------------------------------------------------------------------
// Attack pattern -> suggested security patterns.

struct Recommendation {
  int group_id = 0;
  Stride category = Stride::Spoofing;
  std::string category_name;
  std::vector<SecurityPattern> members;
  std::vector<double> raw_output;
  std::vector<std::string> warnings;
};

/// Runs the model on a raw feature row and attaches the decoded group's members.
Recommendation recommend(const Model& model, const FeatureRow& raw, const Catalog& catalog);
/// Encodes with the catalog's registry first; throws Error on unknown components.
/// The sample's target_group is ignored.
Recommendation recommend(const Model& model, const RawSample& sample, const Catalog& catalog);

std::string format_recommendation(const Recommendation& rec);

std::string format_histogram(const StrideHistogram& histogram, ReportFormat format);

}  // namespace attackmap
