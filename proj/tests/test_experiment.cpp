#include <doctest.h>

#include <cmath>

#include "attackmap/experiment.hpp"
#include "fixtures.hpp"

using namespace attackmap;

namespace {

const Catalog& catalog() {
  static const Catalog c = fixtures::shipped_catalog();
  return c;
}

TrainConfig quick_config(std::uint64_t seed = 1) {
  TrainConfig cfg;
  cfg.seed = seed;
  cfg.max_epochs = 60;
  return cfg;
}

}  // namespace

TEST_CASE("train_model attaches the normalization it trained with") {
  const auto data = build_dataset(catalog(), TargetMode::Scalar);
  const auto [model, log] = train_model(data, 12, quick_config());
  REQUIRE(model.normalization);
  CHECK(*model.normalization == fit_normalization(data));
  CHECK(model.mode == TargetMode::Scalar);
  CHECK(log.epochs_used >= 1);

  const auto [raw, raw_log] = train_model(data, 12, quick_config(), false);
  CHECK_FALSE(raw.normalization);
  CHECK_THROWS_AS(train_model(Dataset{}, 12, quick_config()), Error);
}

TEST_CASE("model file round trip") {
  for (auto mode : {TargetMode::Scalar, TargetMode::OneHot}) {
    const auto data = build_dataset(catalog(), mode);
    for (bool normalize : {true, false}) {
      const auto [model, log] = train_model(data, 9, quick_config(3), normalize);
      const auto loaded = load_model(save_model(model));
      CHECK(loaded == model);
      for (std::size_t i = 0; i < data.size(); i += 7) CHECK(loaded.predict(data.row(i)) == model.predict(data.row(i)));
      CHECK(save_model(loaded) == save_model(model));
    }
  }
}

TEST_CASE("model file errors") {
  const auto data = build_dataset(catalog(), TargetMode::Scalar);
  const auto text = save_model(train_model(data, 3, quick_config()).first);
  CHECK_THROWS_AS(load_model(""), ParseError);
  CHECK_THROWS_AS(load_model(text + "1\n"), ParseError);
  CHECK_THROWS_AS(load_model(text.substr(0, text.size() / 2)), ParseError);

  std::string wrong_mode = text;
  wrong_mode.replace(0, std::string("mode scalar").size(), "mode onehot");
  CHECK_THROWS_AS(load_model(wrong_mode), ParseError);

  const auto norm = text.find("normalization minmax\n");
  REQUIRE(norm != std::string::npos);
  const auto after = norm + std::string("normalization minmax\n").size();
  std::string missing = text;
  missing.erase(after, text.find("hidden_weights") - after);
  CHECK_THROWS_AS(load_model(missing), ParseError);
}

TEST_CASE("evaluation table") {
  const auto data = build_dataset(catalog(), TargetMode::Scalar);
  const auto [train_set, test_set] = split(data, 26, 1);
  const auto [model, log] = train_model(train_set, 20, quick_config());
  const auto table = evaluate(model, test_set);
  CHECK(table.rows.size() == 26);
  for (const auto& r : table.rows) {
    CHECK(r.match == (r.decoded_group == r.expected_group));
    CHECK(r.decoded_group >= 1);
    CHECK(r.decoded_group <= 6);
  }
  CHECK(table.accuracy() == doctest::Approx(static_cast<double>(table.matches()) / 26));

  const auto text = format_eval_table(table, ReportFormat::Text, 5);
  CHECK(text.find("Expected Output") != std::string::npos);
  CHECK(text.find("(21 more rows not shown)") != std::string::npos);
  CHECK(text.find("accuracy: " + std::to_string(table.matches()) + "/26") != std::string::npos);
  const auto csv = format_eval_table(table, ReportFormat::Csv);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 27);

  CHECK_THROWS_AS(evaluate(model, build_dataset(catalog(), TargetMode::OneHot)), Error);
  CHECK_THROWS_AS(evaluate(model, Dataset{}), Error);
}

TEST_CASE("sweep is deterministic regardless of threads") {
  const auto data = build_dataset(catalog(), TargetMode::Scalar);
  const std::vector<std::size_t> counts{4, 8};
  auto cfg = quick_config();
  cfg.max_epochs = 40;
  SweepOptions one;
  one.threads = 1;
  SweepOptions many;
  many.threads = 3;
  const auto a = run_sweep(data, counts, 3, cfg, 100, one);
  const auto b = run_sweep(data, counts, 3, cfg, 100, many);
  REQUIRE(a.rows.size() == 2);
  REQUIRE(a.runs.size() == 6);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].hidden == counts[i]);
    CHECK(a.rows[i].mean_mse == b.rows[i].mean_mse);
    CHECK(a.rows[i].mean_epochs == b.rows[i].mean_epochs);
    CHECK(std::isfinite(a.rows[i].mean_mse));
  }
  CHECK(a.runs[4].seed == 101);

  const auto text = format_sweep_report(a, ReportFormat::Text);
  CHECK(text.rfind("n_hidden", 0) == 0);
  CHECK(format_sweep_report(a, ReportFormat::Csv).rfind("n_hidden,mean_mse,mean_epochs,mean_seconds\n", 0) == 0);

  CHECK_THROWS_AS(run_sweep(data, std::vector<std::size_t>{}, 1, cfg, 0), Error);
  CHECK_THROWS_AS(run_sweep(data, counts, 0, cfg, 0), Error);
  CHECK_THROWS_AS(run_sweep(data, std::vector<std::size_t>{0}, 1, cfg, 0), Error);
}

TEST_CASE("recommendation") {
  const auto data = build_dataset(catalog(), TargetMode::OneHot);
  const auto [model, log] = train_model(data, 10, quick_config());
  const auto rec = recommend(model, RawSample{1, "HardDrive", "Log", AttackType::Availability, 1}, catalog());
  CHECK(rec.group_id >= 1);
  CHECK(rec.raw_output.size() == 6);
  CHECK(rec.members == catalog().group_members(rec.group_id));
  CHECK(rec.category == stride_from_group(rec.group_id));
  const auto text = format_recommendation(rec);
  CHECK(text.rfind("group: " + std::to_string(rec.group_id), 0) == 0);
  CHECK_THROWS_AS(recommend(model, RawSample{1, "Widget", "Log", AttackType::Availability, 1}, catalog()), Error);

  // A hand-built network that always answers group 3.
  Model fixed{Mlp({4, 1, 1}, OutputActivation::Linear), TargetMode::Scalar, std::nullopt};
  fixed.network.params().output_biases()[0] = 3.0;
  const auto rep = recommend(fixed, FeatureRow{1, 42, 58, 1}, catalog());
  CHECK(rep.category == Stride::Repudiation);
  CHECK(rep.warnings.size() == 1);
}

TEST_CASE("histogram report") {
  const auto h = stride_histogram(catalog());
  CHECK(format_histogram(h, ReportFormat::Text) == "S=1\nT=2\nR=0\nI=6\nD=21\nE=27\n");
  CHECK(format_histogram(h, ReportFormat::Csv) ==
        "category,group,count\nS,1,1\nT,2,2\nR,3,0\nI,4,6\nD,5,21\nE,6,27\n");
}
