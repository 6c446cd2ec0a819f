#include "attackmap/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "attackmap/catalog.hpp"
#include "attackmap/encoder.hpp"
#include "attackmap/experiment.hpp"
#include "attackmap/model.hpp"
#include "attackmap/neuralnet.hpp"

namespace attackmap::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + path + "'");
  f << content;
  if (!f) throw Error("failed writing '" + path + "'");
}

Catalog read_catalog(const std::string& catalog_path, const std::string& registry_path) {
  return load_catalog(read_file(catalog_path), load_registry(read_file(registry_path)));
}

struct Options {
  std::string catalog;
  std::string registry;
  std::string data;
  std::string model;
  std::string out;
  std::string train_out;
  std::string test_out;
  std::string mode = "scalar";
  std::string format = "text";
  bool header = false;
  bool no_normalize = false;
  bool drop_attack_id = false;

  std::size_t hidden = 90;
  std::vector<std::size_t> hidden_list{80, 90, 100, 110, 120};
  std::size_t runs = 5;
  std::size_t n_test = 26;
  std::uint64_t seed = 0;
  std::size_t rows = 0;
  unsigned threads = 0;
  TrainConfig train;

  // recommend
  std::vector<double> features;
  int attack_id = 0;
  std::string resource;
  std::string vector;
  std::string type;
};

TargetMode parsed_mode(const Options& o) { return *mode_from_name(o.mode); }
ReportFormat parsed_format(const Options& o) { return o.format == "csv" ? ReportFormat::Csv : ReportFormat::Text; }

void add_mode(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "Target encoding")->check(CLI::IsMember({"scalar", "onehot"}))->capture_default_str();
}
void add_format(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
}
void add_out(CLI::App* cmd, Options& o, const char* what) { cmd->add_option("--out", o.out, what); }
void add_header(CLI::App* cmd, Options& o) { cmd->add_flag("--header", o.header, "Dataset CSV has/gets a header line"); }

void add_training(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Seed for weights and the validation hold-out")->capture_default_str();
  cmd->add_option("--max-epochs", o.train.max_epochs, "Epoch limit")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--max-fail", o.train.max_fail, "Consecutive validation failures allowed")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--min-grad", o.train.min_grad, "Gradient infinity-norm floor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--val-fraction", o.train.val_fraction, "Fraction of training rows held out for early stopping")
      ->check([](const std::string& s) -> std::string {
        try {
          const double v = std::stod(s);
          return v >= 0.0 && v < 1.0 ? "" : "must be in [0, 1)";
        } catch (...) {
          return "not a number";
        }
      })
      ->capture_default_str();
  cmd->add_option("--goal", o.train.goal, "Training MSE goal")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_flag("--no-normalize", o.no_normalize, "Feed raw feature values to the network");
  add_mode(cmd, o);
  add_header(cmd, o);
}

std::string summarize(const TrainLog& log) {
  std::ostringstream ss;
  ss.precision(6);
  ss << "stop=" << stop_reason_name(log.stop_reason) << " epochs=" << log.epochs_used << " best_epoch=" << log.best_epoch
     << " train_mse=" << log.final_train_mse << " val_mse=" << log.epochs[log.best_epoch - 1].val_mse
     << " seconds=" << log.wall_seconds << '\n';
  return ss.str();
}

int run_command(const CLI::App& app, Options& o, std::ostream& out, std::ostream& err) {
  const auto is = [&](const char* name) { return app.got_subcommand(name); };

  if (is("histogram")) {
    const auto catalog = read_catalog(o.catalog, o.registry);
    write_output(o.out, format_histogram(stride_histogram(catalog), parsed_format(o)), out);
  } else if (is("build-dataset")) {
    const auto catalog = read_catalog(o.catalog, o.registry);
    write_output(o.out, write_csv(build_dataset(catalog, parsed_mode(o), !o.drop_attack_id), o.header), out);
  } else if (is("split")) {
    const auto dataset = read_csv(read_file(o.data), parsed_mode(o), o.header);
    const auto [train, test] = split(dataset, o.n_test, o.seed);
    write_output(o.train_out, write_csv(train, o.header), out);
    write_output(o.test_out, write_csv(test, o.header), out);
    err << "split: " << train.size() << " train / " << test.size() << " test\n";
  } else if (is("train")) {
    const auto dataset = read_csv(read_file(o.data), parsed_mode(o), o.header);
    o.train.seed = o.seed;
    const auto [model, log] = train_model(dataset, o.hidden, o.train, !o.no_normalize);
    write_output(o.out, save_model(model), out);
    err << summarize(log);
  } else if (is("evaluate")) {
    const auto model = load_model(read_file(o.model));
    const auto test = read_csv(read_file(o.data), model.mode, o.header);
    const auto table = evaluate(model, test);
    std::optional<std::size_t> rows;
    if (o.rows > 0) rows = o.rows;
    write_output(o.out, format_eval_table(table, parsed_format(o), rows), out);
  } else if (is("sweep")) {
    const auto dataset = read_csv(read_file(o.data), parsed_mode(o), o.header);
    SweepOptions opts;
    opts.normalize_inputs = !o.no_normalize;
    opts.threads = o.threads;
    const auto report = run_sweep(dataset, o.hidden_list, o.runs, o.train, o.seed, opts);
    write_output(o.out, format_sweep_report(report, parsed_format(o)), out);
  } else if (is("recommend")) {
    const auto catalog = read_catalog(o.catalog, o.registry);
    const auto model = load_model(read_file(o.model));
    Recommendation rec;
    if (!o.features.empty()) {
      if (o.features.size() != kFeatureCount) {
        throw Error("--features needs exactly 4 comma-separated values");
      }
      FeatureRow row{};
      std::copy(o.features.begin(), o.features.end(), row.begin());
      rec = recommend(model, row, catalog);
    } else {
      if (o.attack_id < 1 || o.resource.empty() || o.vector.empty() || o.type.size() != 1) {
        throw Error("recommend needs --features or all of --attack-id, --resource, --vector, --type");
      }
      const auto type = attack_type_from_letter(o.type[0]);
      if (!type) throw Error("--type must be A, I or C");
      rec = recommend(model, RawSample{o.attack_id, o.resource, o.vector, *type, 1}, catalog);
    }
    for (const auto& w : rec.warnings) err << "warning: " << w << '\n';
    write_output(o.out, format_recommendation(rec), out);
  }
  return kExitOk;
}

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Match attack patterns to STRIDE security-pattern groups with a feed-forward network", "attackmap"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every command");
  Options o;

  auto* histogram = app.add_subcommand("histogram", "Count catalog patterns per STRIDE category");
  histogram->add_option("--catalog", o.catalog, "Attack pattern catalog")->required();
  histogram->add_option("--registry", o.registry, "Component registry CSV")->required();
  add_format(histogram, o);
  add_out(histogram, o, "Write the report here instead of standard output");

  auto* build = app.add_subcommand("build-dataset", "Encode the catalog into a dataset CSV");
  build->add_option("--catalog", o.catalog, "Attack pattern catalog")->required();
  build->add_option("--registry", o.registry, "Component registry CSV")->required();
  build->add_flag("--drop-attack-id", o.drop_attack_id, "Write 0 instead of the attack id in feature 1");
  add_mode(build, o);
  add_header(build, o);
  add_out(build, o, "Dataset CSV path");

  auto* split_cmd = app.add_subcommand("split", "Split a dataset into train and test parts");
  split_cmd->add_option("--data", o.data, "Dataset CSV")->required();
  split_cmd->add_option("--n-test", o.n_test, "Rows in the test part")->capture_default_str();
  split_cmd->add_option("--seed", o.seed, "Split seed")->capture_default_str();
  split_cmd->add_option("--train-out", o.train_out, "Training part CSV")->required();
  split_cmd->add_option("--test-out", o.test_out, "Test part CSV")->required();
  add_mode(split_cmd, o);
  add_header(split_cmd, o);

  auto* train_cmd = app.add_subcommand("train", "Train a network on a dataset CSV");
  train_cmd->add_option("--data", o.data, "Training dataset CSV")->required();
  train_cmd->add_option("--hidden", o.hidden, "Hidden neurons")->check(CLI::PositiveNumber)->capture_default_str();
  add_training(train_cmd, o);
  add_out(train_cmd, o, "Model file path");

  auto* eval_cmd = app.add_subcommand("evaluate", "Actual vs expected outputs on a test set");
  eval_cmd->add_option("--model", o.model, "Model file")->required();
  eval_cmd->add_option("--data", o.data, "Test dataset CSV")->required();
  eval_cmd->add_option("--rows", o.rows, "Show only the first N rows (0 = all)")->capture_default_str();
  add_header(eval_cmd, o);
  add_format(eval_cmd, o);
  add_out(eval_cmd, o, "Write the report here instead of standard output");

  auto* sweep_cmd = app.add_subcommand("sweep", "Average training statistics over hidden-neuron counts");
  sweep_cmd->add_option("--data", o.data, "Training dataset CSV")->required();
  sweep_cmd->add_option("--hidden", o.hidden_list, "Comma-separated hidden-neuron counts")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--runs", o.runs, "Runs per neuron count")->check(CLI::PositiveNumber)->capture_default_str();
  sweep_cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
  add_training(sweep_cmd, o);
  add_format(sweep_cmd, o);
  add_out(sweep_cmd, o, "Write the report here instead of standard output");

  auto* rec_cmd = app.add_subcommand("recommend", "Suggest security patterns for one attack pattern");
  rec_cmd->add_option("--model", o.model, "Model file")->required();
  rec_cmd->add_option("--catalog", o.catalog, "Attack pattern catalog")->required();
  rec_cmd->add_option("--registry", o.registry, "Component registry CSV")->required();
  rec_cmd->add_option("--features", o.features, "Encoded row attack_id,resource_id,vector_id,type")->delimiter(',');
  rec_cmd->add_option("--attack-id", o.attack_id, "Attack pattern id");
  rec_cmd->add_option("--resource", o.resource, "Attacked resource component");
  rec_cmd->add_option("--vector", o.vector, "Attack vector component");
  rec_cmd->add_option("--type", o.type, "Attack type: A, I or C");
  add_out(rec_cmd, o, "Write the recommendation here instead of standard output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    if (app.get_subcommands().empty()) {
      out << app.help("", CLI::AppFormatMode::All);
    } else {
      out << app.get_subcommands().front()->help();
    }
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return kExitUsage;
  }

  try {
    return run_command(app, o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace attackmap::cli
