#include <doctest.h>

#include <cmath>
#include <random>

#include "attackmap/neuralnet.hpp"

using namespace attackmap;

namespace {

// Loss recomputed from scratch, independent of the library's forward pass.
double reference_loss(const Mlp& net, const Dataset& batch) {
  const auto& s = net.sizes();
  const auto& p = net.params();
  double total = 0.0;
  for (std::size_t r = 0; r < batch.size(); ++r) {
    std::vector<double> h(s.hidden);
    for (std::size_t j = 0; j < s.hidden; ++j) {
      double a = p.hidden_biases()[j];
      for (std::size_t i = 0; i < s.inputs; ++i) a += p.hidden_weights()[j * s.inputs + i] * batch.row(r)[i];
      h[j] = std::tanh(a);
    }
    for (std::size_t k = 0; k < s.outputs; ++k) {
      double a = p.output_biases()[k];
      for (std::size_t j = 0; j < s.hidden; ++j) a += p.output_weights()[k * s.hidden + j] * h[j];
      const double y = net.activation() == OutputActivation::TanSigmoid ? std::tanh(a) : a;
      total += (y - batch.target(r)[k]) * (y - batch.target(r)[k]);
    }
  }
  return total / static_cast<double>(batch.size() * s.outputs);
}

Dataset random_batch(std::mt19937_64& gen, std::size_t n, TargetMode mode) {
  std::uniform_real_distribution<double> x(-1.0, 1.0);
  Dataset d(mode);
  for (std::size_t i = 0; i < n; ++i) {
    d.add({x(gen), x(gen), x(gen), x(gen)}, encode_target(1 + static_cast<int>(gen() % 6), mode));
  }
  return d;
}

}  // namespace

TEST_CASE("initialization") {
  const auto net = init_mlp({4, 90, 1}, OutputActivation::Linear, 1);
  CHECK(net.params().hidden_weights().size() == 360);
  CHECK(net.params().hidden_biases().size() == 90);
  CHECK(net.params().output_weights().size() == 90);
  CHECK(net.params().output_biases().size() == 1);
  CHECK(net.params().size() == 541);
  for (double w : net.params().hidden_weights()) CHECK(std::abs(w) <= 0.5);
  for (double w : net.params().output_weights()) CHECK(std::abs(w) <= 1.0 / std::sqrt(90.0));
  CHECK(init_mlp({4, 90, 1}, OutputActivation::Linear, 1) == net);
  CHECK_FALSE(init_mlp({4, 90, 1}, OutputActivation::Linear, 2) == net);
  CHECK_THROWS_AS(init_mlp({4, 0, 1}, OutputActivation::Linear, 1), Error);
}

TEST_CASE("forward pass") {
  const Mlp zero({4, 5, 1}, OutputActivation::Linear);
  CHECK(forward(zero, std::vector<double>{1, 2, 3, 4}) == std::vector<double>{0.0});

  Mlp tiny({1, 1, 1}, OutputActivation::Linear);
  tiny.params().hidden_weights()[0] = 1.0;
  tiny.params().output_weights()[0] = 1.0;
  CHECK(forward(tiny, std::vector<double>{0.5})[0] == doctest::Approx(0.4621171573).epsilon(1e-10));

  CHECK_THROWS_AS(forward(zero, std::vector<double>{1, 2, 3}), Error);
  CHECK_THROWS_AS(forward(zero, std::vector<double>{1, 2, 3, INFINITY}), Error);

  const auto onehot = init_mlp({4, 7, 6}, OutputActivation::TanSigmoid, 3);
  for (double y : forward(onehot, std::vector<double>{100, -100, 50, 3})) CHECK(std::abs(y) < 1.0);
}

TEST_CASE("mean squared error") {
  CHECK(mse(std::vector<double>{1.0001}, std::vector<double>{1.0}) == doctest::Approx(1e-8).epsilon(1e-6));
  CHECK(mse(std::vector<double>{0, 2}, std::vector<double>{1, 1}) == 1.0);
  CHECK_THROWS_AS(mse(std::vector<double>{1}, std::vector<double>{1, 2}), Error);
  CHECK_THROWS_AS(mse(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST_CASE("backprop matches central finite differences") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mode = trial % 2 ? TargetMode::OneHot : TargetMode::Scalar;
    const std::size_t hidden = 1 + gen() % 10;
    auto net = init_mlp(layer_sizes_for(mode, hidden), activation_for(mode), gen());
    const auto batch = random_batch(gen, 1 + gen() % 16, mode);
    const auto analytic = backprop_full_batch(net, batch);
    CHECK(analytic.mse == doctest::Approx(reference_loss(net, batch)).epsilon(1e-12));

    auto w = net.params().values();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(w[i]));
      const double saved = w[i];
      w[i] = saved + h;
      const double up = reference_loss(net, batch);
      w[i] = saved - h;
      const double down = reference_loss(net, batch);
      w[i] = saved;
      const double numeric = (up - down) / (2 * h);
      const double g = analytic.gradient.values()[i];
      CHECK(std::abs(g - numeric) <= std::max(1e-8, 1e-6 * std::max(std::abs(g), std::abs(numeric))));
    }
  }
}

TEST_CASE("rprop sign rules") {
  ParameterSet w(LayerSizes{1, 1, 1});
  ParameterSet g(LayerSizes{1, 1, 1});
  RpropParams params;
  params.initial_step = 0.1;
  RpropState state(w, params);

  g.values()[0] = 1.0;
  rprop_step(w, g, state);  // no history: keep the step, move against the gradient
  CHECK(state.steps()[0] == doctest::Approx(0.1));
  CHECK(w.values()[0] == doctest::Approx(-0.1));

  rprop_step(w, g, state);  // agreement
  CHECK(state.steps()[0] == doctest::Approx(0.12));
  CHECK(w.values()[0] == doctest::Approx(-0.22));

  g.values()[0] = -1.0;
  rprop_step(w, g, state);  // flip: shrink, no move, forget
  CHECK(state.steps()[0] == doctest::Approx(0.06));
  CHECK(w.values()[0] == doctest::Approx(-0.22));
  CHECK(state.previous_gradient()[0] == 0.0);

  rprop_step(w, g, state);  // after a flip the step is reused unchanged
  CHECK(state.steps()[0] == doctest::Approx(0.06));
  CHECK(w.values()[0] == doctest::Approx(-0.16));

  // zero gradient leaves weight and step alone
  const double before = w.values()[1];
  rprop_step(w, ParameterSet(LayerSizes{1, 1, 1}), state);
  CHECK(w.values()[1] == before);
  CHECK(state.steps()[1] == doctest::Approx(0.1));
}

TEST_CASE("rprop step bounds") {
  ParameterSet w(LayerSizes{1, 1, 1});
  ParameterSet g(LayerSizes{1, 1, 1});
  RpropState state(w);
  for (int i = 0; i < 200; ++i) {
    for (auto& v : g.values()) v = 1.0;
    g.values()[0] = i % 2 ? 1.0 : -1.0;
    rprop_step(w, g, state);
  }
  CHECK(state.steps()[0] >= 1e-6);
  CHECK(state.steps()[1] <= 50.0);
  CHECK(state.steps()[1] == 50.0);

  RpropParams bad;
  bad.decrease = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(rprop_step(w, ParameterSet(LayerSizes{2, 1, 1}), state), Error);
}

TEST_CASE("training stops") {
  std::mt19937_64 gen(5);
  const auto data = random_batch(gen, 30, TargetMode::Scalar);
  const auto net = init_mlp({4, 6, 1}, OutputActivation::Linear, 9);

  SUBCASE("goal") {
    TrainConfig cfg;
    cfg.goal = 1e9;
    const auto r = train(net, data, Dataset{}, cfg);
    CHECK(r.log.stop_reason == StopReason::Goal);
    CHECK(r.log.epochs_used == 1);
    CHECK(r.model == net);
  }
  SUBCASE("max fail returns the best-validation weights") {
    // Validation targets contradict the fit targets, so it cannot improve for long.
    Dataset fit(TargetMode::Scalar), val(TargetMode::Scalar);
    for (int i = 0; i < 10; ++i) {
      const double x = i / 10.0;
      fit.add({x, x, x, x}, std::vector<double>{1});
      val.add({x, x, x, x}, std::vector<double>{6});
    }
    TrainConfig cfg;
    const auto r = train(net, fit, val, cfg);
    CHECK(r.log.stop_reason == StopReason::MaxFail);
    CHECK(r.log.epochs_used == r.log.best_epoch + cfg.max_fail);
    CHECK(r.log.final_train_mse == r.log.epochs[r.log.best_epoch - 1].train_mse);
    CHECK(mse(predict_all(r.model, val), val.targets()) == r.log.epochs[r.log.best_epoch - 1].val_mse);
  }
  SUBCASE("min grad") {
    TrainConfig cfg;
    cfg.min_grad = 1e9;
    const auto r = train(net, data, Dataset{}, cfg);
    CHECK(r.log.stop_reason == StopReason::MinGrad);
    CHECK(r.log.epochs_used == 1);
  }
  SUBCASE("max epochs") {
    TrainConfig cfg;
    cfg.max_epochs = 25;
    const auto r = train(net, data, Dataset{}, cfg);
    CHECK(r.log.stop_reason == StopReason::MaxEpochs);
    CHECK(r.log.epochs.size() == 25);
    CHECK(r.log.final_train_mse == mse(predict_all(r.model, data), data.targets()));
  }
  SUBCASE("invalid config") {
    TrainConfig cfg;
    cfg.val_fraction = 1.0;
    CHECK_THROWS_AS(train(net, data, cfg), Error);
    cfg = {};
    cfg.max_fail = 0;
    CHECK_THROWS_AS(train(net, data, cfg), Error);
    CHECK_THROWS_AS(train(net, Dataset{}, TrainConfig{}), Error);
  }
}

TEST_CASE("training is deterministic and tracks the best validation error") {
  std::mt19937_64 gen(8);
  const auto data = random_batch(gen, 60, TargetMode::OneHot);
  const auto net = init_mlp({4, 10, 6}, OutputActivation::TanSigmoid, 4);
  TrainConfig cfg;
  cfg.seed = 17;
  cfg.max_epochs = 300;
  const auto a = train(net, data, cfg);
  const auto b = train(net, data, cfg);
  CHECK(a.model == b.model);
  CHECK(a.log.epochs_used == b.log.epochs_used);
  for (std::size_t i = 1; i < a.log.epochs.size(); ++i) {
    CHECK(a.log.epochs[i].best_val_mse <= a.log.epochs[i - 1].best_val_mse);
  }
  const auto [fit, val] = holdout_split(data, cfg.val_fraction, cfg.seed);
  CHECK(val.size() == 9);
  CHECK(fit.size() == 51);
}
