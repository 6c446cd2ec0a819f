#include "attackmap/neuralnet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "attackmap/random.hpp"

namespace attackmap {

namespace {

void check_sizes(const LayerSizes& s) {
  if (s.inputs < 1 || s.hidden < 1 || s.outputs < 1) {
    throw Error("layer sizes must be >= 1, got " + std::to_string(s.inputs) + "-" + std::to_string(s.hidden) +
                "-" + std::to_string(s.outputs));
  }
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const auto half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Hidden activations and outputs for one input row.
void forward_into(const Mlp& mlp, std::span<const double> x, std::span<double> hidden, std::span<double> out) {
  const auto& s = mlp.sizes();
  const auto& p = mlp.params();
  const auto w1 = p.hidden_weights();
  const auto b1 = p.hidden_biases();
  const auto w2 = p.output_weights();
  const auto b2 = p.output_biases();
  for (std::size_t j = 0; j < s.hidden; ++j) {
    double a = b1[j];
    const auto row = w1.subspan(j * s.inputs, s.inputs);
    for (std::size_t i = 0; i < s.inputs; ++i) a += row[i] * x[i];
    hidden[j] = std::tanh(a);
  }
  for (std::size_t k = 0; k < s.outputs; ++k) {
    double a = b2[k];
    const auto row = w2.subspan(k * s.hidden, s.hidden);
    for (std::size_t j = 0; j < s.hidden; ++j) a += row[j] * hidden[j];
    out[k] = mlp.activation() == OutputActivation::TanSigmoid ? std::tanh(a) : a;
  }
}

void check_batch(const Mlp& mlp, const Dataset& batch) {
  if (batch.empty()) throw Error("empty batch");
  if (!mlp.supports(batch.mode())) {
    throw Error("network " + std::to_string(mlp.sizes().inputs) + "-" + std::to_string(mlp.sizes().hidden) + "-" +
                std::to_string(mlp.sizes().outputs) + " (" + std::string(activation_name(mlp.activation())) +
                ") does not match " + std::string(mode_name(batch.mode())) + " targets");
  }
}

}  // namespace

std::string_view activation_name(OutputActivation a) {
  return a == OutputActivation::Linear ? "linear" : "tansig";
}

std::optional<OutputActivation> activation_from_name(std::string_view name) {
  if (name == "linear") return OutputActivation::Linear;
  if (name == "tansig") return OutputActivation::TanSigmoid;
  return std::nullopt;
}

ParameterSet::ParameterSet(LayerSizes sizes) : sizes_(sizes) {
  check_sizes(sizes);
  values_.assign(sizes.hidden * sizes.inputs + sizes.hidden + sizes.outputs * sizes.hidden + sizes.outputs, 0.0);
}

double ParameterSet::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Mlp::Mlp(LayerSizes sizes, OutputActivation activation) : params_(sizes), activation_(activation) {}

bool Mlp::supports(TargetMode mode) const {
  return sizes().inputs == kFeatureCount && sizes().outputs == target_width(mode) &&
         activation_ == activation_for(mode);
}

LayerSizes layer_sizes_for(TargetMode mode, std::size_t hidden) {
  return {kFeatureCount, hidden, target_width(mode)};
}

OutputActivation activation_for(TargetMode mode) {
  return mode == TargetMode::Scalar ? OutputActivation::Linear : OutputActivation::TanSigmoid;
}

Mlp init_mlp(LayerSizes sizes, OutputActivation activation, std::uint64_t seed) {
  Mlp mlp(sizes, activation);
  Rng rng(seed);
  auto& p = mlp.params();
  const double r1 = 1.0 / std::sqrt(static_cast<double>(sizes.inputs));
  const double r2 = 1.0 / std::sqrt(static_cast<double>(sizes.hidden));
  for (auto& w : p.hidden_weights()) w = rng.uniform(-r1, r1);
  for (auto& b : p.hidden_biases()) b = rng.uniform(-r1, r1);
  for (auto& w : p.output_weights()) w = rng.uniform(-r2, r2);
  for (auto& b : p.output_biases()) b = rng.uniform(-r2, r2);
  return mlp;
}

std::vector<double> forward(const Mlp& mlp, std::span<const double> x) {
  if (x.size() != mlp.sizes().inputs) {
    throw Error("input has " + std::to_string(x.size()) + " values, network expects " +
                std::to_string(mlp.sizes().inputs));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw Error("non-finite network input");
  }
  std::vector<double> hidden(mlp.sizes().hidden);
  std::vector<double> out(mlp.sizes().outputs);
  forward_into(mlp, x, hidden, out);
  return out;
}

std::vector<double> predict_all(const Mlp& mlp, const Dataset& dataset) {
  if (mlp.sizes().inputs != kFeatureCount) throw Error("network must take 4 inputs");
  const auto n_out = mlp.sizes().outputs;
  std::vector<double> hidden(mlp.sizes().hidden);
  std::vector<double> out(dataset.size() * n_out);
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    forward_into(mlp, dataset.row(r), hidden, std::span<double>(out).subspan(r * n_out, n_out));
  }
  return out;
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size()) {
    throw Error("mse: " + std::to_string(predictions.size()) + " predictions vs " +
                std::to_string(targets.size()) + " targets");
  }
  if (predictions.empty()) throw Error("mse: empty input");
  std::vector<double> sq(predictions.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double d = predictions[i] - targets[i];
    sq[i] = d * d;
  }
  return pairwise_sum(sq) / static_cast<double>(sq.size());
}

BatchGradient backprop_full_batch(const Mlp& mlp, const Dataset& batch) {
  check_batch(mlp, batch);
  const auto& s = mlp.sizes();
  const auto& p = mlp.params();
  const auto w2 = p.output_weights();
  const bool tan_out = mlp.activation() == OutputActivation::TanSigmoid;
  const double scale = 2.0 / static_cast<double>(batch.size() * s.outputs);

  BatchGradient result{ParameterSet(s), 0.0};
  auto& g = result.gradient;
  auto gw1 = g.hidden_weights();
  auto gb1 = g.hidden_biases();
  auto gw2 = g.output_weights();
  auto gb2 = g.output_biases();

  std::vector<double> hidden(s.hidden);
  std::vector<double> out(s.outputs);
  std::vector<double> delta_out(s.outputs);
  std::vector<double> delta_hidden(s.hidden);
  std::vector<double> sq(batch.size() * s.outputs);

  for (std::size_t r = 0; r < batch.size(); ++r) {
    const auto& x = batch.row(r);
    const auto t = batch.target(r);
    forward_into(mlp, x, hidden, out);

    for (std::size_t k = 0; k < s.outputs; ++k) {
      const double err = out[k] - t[k];
      sq[r * s.outputs + k] = err * err;
      delta_out[k] = scale * err * (tan_out ? 1.0 - out[k] * out[k] : 1.0);
    }
    std::fill(delta_hidden.begin(), delta_hidden.end(), 0.0);
    for (std::size_t k = 0; k < s.outputs; ++k) {
      gb2[k] += delta_out[k];
      auto grow = gw2.subspan(k * s.hidden, s.hidden);
      const auto wrow = w2.subspan(k * s.hidden, s.hidden);
      for (std::size_t j = 0; j < s.hidden; ++j) {
        grow[j] += delta_out[k] * hidden[j];
        delta_hidden[j] += delta_out[k] * wrow[j];
      }
    }
    for (std::size_t j = 0; j < s.hidden; ++j) {
      const double d = delta_hidden[j] * (1.0 - hidden[j] * hidden[j]);
      gb1[j] += d;
      auto grow = gw1.subspan(j * s.inputs, s.inputs);
      for (std::size_t i = 0; i < s.inputs; ++i) grow[i] += d * x[i];
    }
  }
  result.mse = pairwise_sum(sq) / static_cast<double>(sq.size());
  return result;
}

// ---------------------------------------------------------------------------

void RpropParams::validate() const {
  if (!(increase > 1.0 && decrease > 0.0 && decrease < 1.0)) {
    throw Error("RPROP factors must satisfy increase > 1 > decrease > 0");
  }
  if (!(min_step > 0.0 && min_step <= initial_step && initial_step <= max_step)) {
    throw Error("RPROP steps must satisfy 0 < min <= initial <= max");
  }
}

RpropState::RpropState(const ParameterSet& like, RpropParams params)
    : params_(params), steps_(like.size(), params.initial_step), previous_(like.size(), 0.0) {
  params_.validate();
}

void rprop_step(ParameterSet& weights, const ParameterSet& gradient, RpropState& state) {
  if (!(weights.sizes() == gradient.sizes()) || state.steps_.size() != weights.size()) {
    throw Error("rprop_step: parameter, gradient and state shapes differ");
  }
  const auto& rp = state.params_;
  auto w = weights.values();
  const auto g = gradient.values();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double agreement = g[i] * state.previous_[i];
    double& step = state.steps_[i];
    if (agreement > 0.0) {
      step = std::min(step * rp.increase, rp.max_step);
    } else if (agreement < 0.0) {
      step = std::max(step * rp.decrease, rp.min_step);
      state.previous_[i] = 0.0;  // skip this weight now, no adaptation next step
      continue;
    }
    if (g[i] > 0.0) {
      w[i] -= step;
    } else if (g[i] < 0.0) {
      w[i] += step;
    }
    state.previous_[i] = g[i];
  }
}

}  // namespace attackmap
