#include "attackmap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <string>
#include <thread>

#include "text_util.hpp"

namespace attackmap {

namespace {

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string join_output(std::span<const double> values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += detail::format_shortest(values[i]);
  }
  return out;
}

}  // namespace

std::pair<Model, TrainLog> train_model(const Dataset& train_set, std::size_t hidden, const TrainConfig& config,
                                       bool normalize_inputs) {
  if (train_set.empty()) throw Error("empty training set");
  const auto mode = train_set.mode();
  Model model{init_mlp(layer_sizes_for(mode, hidden), activation_for(mode), config.seed), mode, std::nullopt};
  if (normalize_inputs) {
    auto [scaled, params] = normalize(train_set);
    auto result = train(std::move(model.network), scaled, config);
    model.network = std::move(result.model);
    model.normalization = params;
    return {std::move(model), std::move(result.log)};
  }
  auto result = train(std::move(model.network), train_set, config);
  model.network = std::move(result.model);
  return {std::move(model), std::move(result.log)};
}

// ---------------------------------------------------------------------------

std::size_t EvalTable::matches() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const EvalRow& r) { return r.match; }));
}

double EvalTable::accuracy() const {
  return rows.empty() ? 0.0 : static_cast<double>(matches()) / static_cast<double>(rows.size());
}

EvalTable evaluate(const Model& model, const Dataset& test_set) {
  if (test_set.empty()) throw Error("empty test set");
  if (test_set.mode() != model.mode || !model.network.supports(test_set.mode())) {
    throw Error("test set mode " + std::string(mode_name(test_set.mode())) + " does not match model mode " +
                std::string(mode_name(model.mode)));
  }
  EvalTable table;
  table.mode = model.mode;
  for (std::size_t i = 0; i < test_set.size(); ++i) {
    EvalRow row;
    row.sample_index = i + 1;
    row.actual = model.predict(test_set.row(i));
    row.expected_group = decode_output(test_set.target(i), test_set.mode());
    row.decoded_group = decode_output(row.actual, model.mode);
    row.match = row.decoded_group == row.expected_group;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_eval_table(const EvalTable& table, ReportFormat format, std::optional<std::size_t> max_rows) {
  const std::size_t shown = std::min(table.rows.size(), max_rows.value_or(table.rows.size()));
  std::string out;
  if (format == ReportFormat::Csv) {
    out += "sample,actual,expected,decoded,match\n";
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& r = table.rows[i];
      out += std::to_string(r.sample_index) + ',' + join_output(r.actual, ' ') + ',' +
             std::to_string(r.expected_group) + ',' + std::to_string(r.decoded_group) + ',' +
             (r.match ? "1" : "0") + '\n';
    }
    return out;
  }
  out += pad("s/n", 6) + pad("Test Data Sample", 20) + pad("Actual Output", 26) + pad("Expected Output", 17) +
         pad("Decoded", 9) + "Match\n";
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& r = table.rows[i];
    out += pad(std::to_string(r.sample_index), 6) + pad("Sample " + std::to_string(r.sample_index), 20) +
           pad(join_output(r.actual, ' '), 26) + pad(std::to_string(r.expected_group), 17) +
           pad(std::to_string(r.decoded_group), 9) + (r.match ? "yes" : "NO") + '\n';
  }
  if (shown < table.rows.size()) {
    out += "(" + std::to_string(table.rows.size() - shown) + " more rows not shown)\n";
  }
  out += "accuracy: " + std::to_string(table.matches()) + "/" + std::to_string(table.rows.size()) + " = " +
         fixed(table.accuracy(), 4) + '\n';
  return out;
}

// ---------------------------------------------------------------------------

SweepReport run_sweep(const Dataset& dataset, std::span<const std::size_t> neuron_counts, std::size_t runs,
                      const TrainConfig& config, std::uint64_t master_seed, const SweepOptions& options) {
  if (neuron_counts.empty()) throw Error("sweep needs at least one neuron count");
  if (runs < 1) throw Error("sweep needs runs >= 1");
  for (auto n : neuron_counts) {
    if (n < 1) throw Error("neuron count must be >= 1");
  }
  if (dataset.empty()) throw Error("empty training set");
  config.validate();

  SweepReport report;
  report.runs.resize(neuron_counts.size() * runs);
  for (std::size_t c = 0; c < neuron_counts.size(); ++c) {
    for (std::size_t r = 0; r < runs; ++r) {
      auto& run = report.runs[c * runs + r];
      run.hidden = neuron_counts[c];
      run.run_index = r;
      run.seed = master_seed + r;
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  const auto worker = [&] {
    for (std::size_t job = next++; job < report.runs.size() && !failed; job = next++) {
      auto& run = report.runs[job];
      try {
        TrainConfig cfg = config;
        cfg.seed = run.seed;
        const auto [model, log] = train_model(dataset, run.hidden, cfg, options.normalize_inputs);
        run.final_train_mse = log.final_train_mse;
        run.final_val_mse = log.epochs[log.best_epoch - 1].val_mse;
        run.epochs_used = log.epochs_used;
        run.wall_seconds = log.wall_seconds;
        run.stop_reason = log.stop_reason;
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, report.runs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Ordered reduction over completed runs.
  for (std::size_t c = 0; c < neuron_counts.size(); ++c) {
    SweepRow row;
    row.hidden = neuron_counts[c];
    for (std::size_t r = 0; r < runs; ++r) {
      const auto& run = report.runs[c * runs + r];
      row.mean_mse += run.final_train_mse;
      row.mean_epochs += static_cast<double>(run.epochs_used);
      row.mean_seconds += run.wall_seconds;
    }
    const auto n = static_cast<double>(runs);
    row.mean_mse /= n;
    row.mean_epochs /= n;
    row.mean_seconds /= n;
    report.rows.push_back(row);
  }
  return report;
}

std::string format_sweep_report(const SweepReport& report, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::Csv) {
    out += "n_hidden,mean_mse,mean_epochs,mean_seconds\n";
    for (const auto& r : report.rows) {
      out += std::to_string(r.hidden) + ',' + detail::format_shortest(r.mean_mse) + ',' +
             detail::format_shortest(r.mean_epochs) + ',' + detail::format_shortest(r.mean_seconds) + '\n';
    }
    return out;
  }
  out += pad("n_hidden", 10) + pad("mean_mse", 14) + pad("mean_epochs", 13) + "mean_seconds\n";
  for (const auto& r : report.rows) {
    char mse[32];
    std::snprintf(mse, sizeof mse, "%.6g", r.mean_mse);
    out += pad(std::to_string(r.hidden), 10) + pad(mse, 14) + pad(fixed(r.mean_epochs, 1), 13) +
           fixed(r.mean_seconds, 3) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

Recommendation recommend(const Model& model, const FeatureRow& raw, const Catalog& catalog) {
  Recommendation rec;
  rec.raw_output = model.predict(raw);
  rec.group_id = decode_output(rec.raw_output, model.mode);
  rec.category = stride_from_group(rec.group_id);
  rec.category_name = std::string(stride_name(rec.category));
  rec.members = catalog.group_members(rec.group_id);
  if (rec.members.empty()) {
    rec.warnings.push_back("group " + std::to_string(rec.group_id) + " (" + rec.category_name +
                           ") has no security patterns in the catalog");
  }
  if (rec.category == Stride::Repudiation) {
    rec.warnings.push_back(
        "no training pattern is labelled Repudiation; such attacks are assumed to follow an elevation of "
        "privilege, see also group 6");
  }
  return rec;
}

Recommendation recommend(const Model& model, const RawSample& sample, const Catalog& catalog) {
  return recommend(model, encode_sample(sample, catalog.registry()), catalog);
}

std::string format_recommendation(const Recommendation& rec) {
  std::string out;
  out += "group: " + std::to_string(rec.group_id) + " (" + rec.category_name + ")\n";
  out += "raw output: " + join_output(rec.raw_output, ' ') + '\n';
  out += "security patterns:\n";
  for (const auto& m : rec.members) {
    out += "  - " + m.name + " [" + std::string(source_name(m.source)) + "]\n";
  }
  return out;
}

std::string format_histogram(const StrideHistogram& histogram, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::Csv) out += "category,group,count\n";
  for (auto s : kAllStride) {
    const auto count = std::to_string(histogram[group_id(s) - 1]);
    if (format == ReportFormat::Csv) {
      out += std::string(1, stride_letter(s)) + ',' + std::to_string(group_id(s)) + ',' + count + '\n';
    } else {
      out += std::string(1, stride_letter(s)) + '=' + count + '\n';
    }
  }
  return out;
}

}  // namespace attackmap
