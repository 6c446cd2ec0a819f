#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "attackmap/encoder.hpp"
#include "fixtures.hpp"

using namespace attackmap;

namespace {

Dataset sequential(std::size_t n, TargetMode mode = TargetMode::Scalar) {
  Dataset d(mode);
  for (std::size_t i = 0; i < n; ++i) {
    const int g = 1 + static_cast<int>(i % 6);
    d.add({static_cast<double>(i + 1), 10.0 + static_cast<double>(i), 3.0, 1.0}, encode_target(g, mode));
  }
  return d;
}

}  // namespace

TEST_CASE("enumerate samples") {
  const auto catalog = fixtures::shipped_catalog();
  const auto samples = enumerate_samples(catalog);
  CHECK(samples.size() == 226);
  REQUIRE_FALSE(samples.empty());
  CHECK(samples[0] == RawSample{1, "HardDrive", "Log", AttackType::Availability, 5});
  CHECK(std::is_sorted(samples.begin(), samples.end(),
                       [](const RawSample& a, const RawSample& b) { return a.attack_id < b.attack_id; }));
}

TEST_CASE("multi-category patterns yield one sample per category") {
  const std::string text =
      "pattern: 1\nregex: (User+)(Server+)(Log+)(HardDrive+)\nstride: ED\npath: HardDrive,Log,A\n" +
      fixtures::minimal_groups();
  const auto samples = enumerate_samples(load_catalog(text, fixtures::small_registry()));
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].target_group == 5);
  CHECK(samples[1].target_group == 6);
}

TEST_CASE("encode features") {
  const auto reg = fixtures::small_registry();
  CHECK(encode_sample({1, "HardDrive", "Log", AttackType::Availability, 5}, reg) == FeatureRow{1, 42, 58, 1});
  CHECK(encode_sample({1, "HardDrive", "Log", AttackType::Integrity, 5}, reg) == FeatureRow{1, 42, 58, 2});
  CHECK(encode_sample({7, "HardDrive", "Log", AttackType::Availability, 5}, reg, false) ==
        FeatureRow{0, 42, 58, 1});
  CHECK_THROWS_AS(encode_sample({1, "Widget", "Log", AttackType::Availability, 5}, reg), Error);
}

TEST_CASE("targets encode and decode") {
  CHECK(encode_target(5, TargetMode::Scalar) == std::vector<double>{5});
  CHECK(encode_target(1, TargetMode::OneHot) == std::vector<double>{1, 0, 0, 0, 0, 0});
  for (int g = 1; g <= 6; ++g) {
    for (auto mode : {TargetMode::Scalar, TargetMode::OneHot}) {
      CHECK(decode_output(encode_target(g, mode), mode) == g);
    }
  }
  const auto scalar = [](double v) { return decode_output(std::vector<double>{v}, TargetMode::Scalar); };
  CHECK(scalar(5.9999) == 6);
  CHECK(scalar(2.6441) == 3);
  CHECK(scalar(1.7707) == 2);
  CHECK(scalar(0.2) == 1);
  CHECK(scalar(9.4) == 6);
  CHECK(scalar(2.5) == 3);
  CHECK(decode_output(std::vector<double>{0.1, 0.9, 0.9, -1, 0, 0}, TargetMode::OneHot) == 2);
  CHECK_THROWS_AS(scalar(std::nan("")), Error);
  CHECK_THROWS_AS(decode_output(std::vector<double>{1, 2}, TargetMode::Scalar), Error);
}

TEST_CASE("dataset rejects malformed targets") {
  Dataset s(TargetMode::Scalar);
  CHECK_THROWS_AS(s.add({1, 2, 3, 1}, std::vector<double>{7}), Error);
  CHECK_THROWS_AS(s.add({1, 2, 3, 1}, std::vector<double>{2.5}), Error);
  Dataset o(TargetMode::OneHot);
  CHECK_THROWS_AS(o.add({1, 2, 3, 1}, std::vector<double>{1, 1, 0, 0, 0, 0}), Error);
  CHECK_THROWS_AS(o.add({1, 2, 3, 1}, std::vector<double>{1}), Error);
}

TEST_CASE("csv format") {
  const auto reg = fixtures::small_registry();
  Dataset d(TargetMode::Scalar);
  d.add(encode_sample({1, "HardDrive", "Log", AttackType::Availability, 5}, reg), encode_target(5, d.mode()));
  CHECK(write_csv(d) == "1,42,58,1,5\n");
  CHECK(write_csv(d, true) == "attack_id,resource,vector,type,group\n1,42,58,1,5\n");

  Dataset o(TargetMode::OneHot);
  o.add({1, 42, 58, 1}, encode_target(1, o.mode()));
  CHECK(write_csv(o) == "1,42,58,1,1,0,0,0,0,0\n");

  try {
    read_csv("1,42,58,1,5\n1,42,58\n", TargetMode::Scalar);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
  }
  CHECK_THROWS_AS(read_csv("1,42,x,1,5\n", TargetMode::Scalar), ParseError);
  CHECK(read_csv("1,42,58,1,5\r\n", TargetMode::Scalar) == d);
}

TEST_CASE("csv round trip") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> value(-1e6, 1e6);
  for (auto mode : {TargetMode::Scalar, TargetMode::OneHot}) {
    Dataset d(mode);
    for (int i = 0; i < 100; ++i) {
      d.add({value(gen), value(gen), std::ldexp(value(gen), -40), static_cast<double>(i)},
            encode_target(1 + i % 6, mode));
    }
    for (bool header : {false, true}) CHECK(read_csv(write_csv(d, header), mode, header) == d);
  }
}

TEST_CASE("min-max normalization") {
  Dataset d(TargetMode::Scalar);
  d.add({1, 5, 3, 1}, std::vector<double>{1});
  d.add({51, 5, 9, 2}, std::vector<double>{2});
  d.add({26, 5, 6, 3}, std::vector<double>{3});
  const auto [scaled, params] = normalize(d);
  CHECK(scaled.row(0)[0] == -1.0);
  CHECK(scaled.row(1)[0] == 1.0);
  CHECK(scaled.row(2)[0] == 0.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(scaled.row(i)[1] == 0.0);
  CHECK(params.columns[0] == ColumnRange{1, 51});
  CHECK(scaled.targets()[2] == 3.0);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> value(-500, 500);
  for (int i = 0; i < 200; ++i) {
    const FeatureRow x{value(gen), value(gen), value(gen), value(gen)};
    NormalizationParams p;
    for (auto& c : p.columns) {
      const double a = value(gen), b = value(gen);
      c = {std::min(a, b), std::max(a, b)};
    }
    const auto back = p.invert(p.apply(x));
    for (std::size_t c = 0; c < kFeatureCount; ++c) CHECK(std::abs(back[c] - x[c]) <= 1e-12 * std::max(1.0, std::abs(x[c])));
  }

  CHECK(read_normalization(write_normalization(params)) == params);
  CHECK_THROWS_AS(read_normalization("0,1,2\n"), Error);
  CHECK_THROWS_AS(fit_normalization(Dataset{}), Error);
}

TEST_CASE("train/test split") {
  const auto d = sequential(227);
  const auto [train, test] = split(d, 26, 42);
  CHECK(train.size() == 201);
  CHECK(test.size() == 26);

  const auto [train2, test2] = split(d, 26, 42);
  CHECK(train == train2);
  CHECK(test == test2);
  const auto [train3, test3] = split(d, 26, 43);
  CHECK_FALSE(test == test3);

  std::set<double> seen;
  for (const auto& r : train.rows()) seen.insert(r[0]);
  for (const auto& r : test.rows()) CHECK(seen.insert(r[0]).second);
  CHECK(seen.size() == 227);

  const auto [all, none] = split(d, 0, 1);
  CHECK(all == d);
  CHECK(none.empty());
  CHECK_THROWS_AS(split(d, 228, 1), Error);

  const auto idx = sample_indices(100, 10, 5);
  CHECK(std::is_sorted(idx.begin(), idx.end()));
  CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 10);
}

TEST_CASE("shipped dataset") {
  const auto d = build_dataset(fixtures::shipped_catalog(), TargetMode::Scalar);
  CHECK(d.size() == 226);
  CHECK(write_csv(d).substr(0, 12) == "1,42,58,1,5\n");
  const auto o = build_dataset(fixtures::shipped_catalog(), TargetMode::OneHot);
  CHECK(o.size() == 226);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(decode_output(o.target(i), TargetMode::OneHot) == static_cast<int>(d.target(i)[0]));
  }
}
