#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "attackmap/encoder.hpp"

namespace attackmap {

enum class OutputActivation { Linear, TanSigmoid };

std::string_view activation_name(OutputActivation a);
std::optional<OutputActivation> activation_from_name(std::string_view name);

struct LayerSizes {
  std::size_t inputs = kFeatureCount;
  std::size_t hidden = 1;
  std::size_t outputs = 1;

  bool operator==(const LayerSizes&) const = default;
};

/// Every weight and bias of a 3-layer network in one contiguous buffer, in
/// the order hidden weights (hidden x inputs, row-major), hidden biases,
/// output weights (outputs x hidden, row-major), output biases. Gradients
/// share this layout.
class ParameterSet {
 public:
  ParameterSet() = default;
  /// All zeros. Throws Error if any layer size is 0.
  explicit ParameterSet(LayerSizes sizes);

  const LayerSizes& sizes() const { return sizes_; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> hidden_weights() { return section(0, sizes_.hidden * sizes_.inputs); }
  std::span<double> hidden_biases() { return section(hidden_bias_offset(), sizes_.hidden); }
  std::span<double> output_weights() { return section(output_weight_offset(), sizes_.outputs * sizes_.hidden); }
  std::span<double> output_biases() { return section(output_bias_offset(), sizes_.outputs); }
  std::span<const double> hidden_weights() const { return section(0, sizes_.hidden * sizes_.inputs); }
  std::span<const double> hidden_biases() const { return section(hidden_bias_offset(), sizes_.hidden); }
  std::span<const double> output_weights() const {
    return section(output_weight_offset(), sizes_.outputs * sizes_.hidden);
  }
  std::span<const double> output_biases() const { return section(output_bias_offset(), sizes_.outputs); }

  /// Largest absolute entry.
  double max_abs() const;

  bool operator==(const ParameterSet&) const = default;

 private:
  std::size_t hidden_bias_offset() const { return sizes_.hidden * sizes_.inputs; }
  std::size_t output_weight_offset() const { return hidden_bias_offset() + sizes_.hidden; }
  std::size_t output_bias_offset() const { return output_weight_offset() + sizes_.outputs * sizes_.hidden; }
  std::span<double> section(std::size_t off, std::size_t n) { return std::span<double>(values_).subspan(off, n); }
  std::span<const double> section(std::size_t off, std::size_t n) const {
    return std::span<const double>(values_).subspan(off, n);
  }

  LayerSizes sizes_{};
  std::vector<double> values_;
};

/// Input -> tanh hidden layer -> linear or tanh output layer.
class Mlp {
 public:
  /// Zero-initialised. Throws Error if any layer size is 0.
  Mlp(LayerSizes sizes, OutputActivation activation);

  const LayerSizes& sizes() const { return params_.sizes(); }
  OutputActivation activation() const { return activation_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }

  /// Scalar needs 1 linear output, OneHot needs 6 tanh outputs, both with 4 inputs.
  bool supports(TargetMode mode) const;

  bool operator==(const Mlp&) const = default;

 private:
  ParameterSet params_;
  OutputActivation activation_;
};

/// The architecture used for a target mode: Scalar -> n-hidden-1 linear,
/// OneHot -> n-hidden-6 tanh.
LayerSizes layer_sizes_for(TargetMode mode, std::size_t hidden);
OutputActivation activation_for(TargetMode mode);

/// Weights and biases uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
Mlp init_mlp(LayerSizes sizes, OutputActivation activation, std::uint64_t seed);

/// Throws Error on a size mismatch or non-finite input.
std::vector<double> forward(const Mlp& mlp, std::span<const double> x);

/// Outputs for every row, row-major (rows x outputs).
std::vector<double> predict_all(const Mlp& mlp, const Dataset& dataset);

/// Mean of squared differences. Pairwise summation, so the result does not
/// depend on accumulation drift for long inputs. Throws on shape mismatch or
/// empty input.
double mse(std::span<const double> predictions, std::span<const double> targets);

struct BatchGradient {
  ParameterSet gradient;  // d(batch MSE)/d(parameter)
  double mse = 0.0;       // batch MSE at the current parameters
};

/// Exact gradient of the batch MSE with respect to every parameter.
/// Throws Error on an empty batch or a mode the network does not support.
BatchGradient backprop_full_batch(const Mlp& mlp, const Dataset& batch);

// ---------------------------------------------------------------------------

struct RpropParams {
  double initial_step = 0.07;
  double increase = 1.2;
  double decrease = 0.5;
  double max_step = 50.0;
  double min_step = 1e-6;

  /// Throws Error unless increase > 1 > decrease > 0 and 0 < min <= initial <= max.
  void validate() const;
};

/// iRPROP-: per-weight step sizes plus the gradient remembered from the last step.
class RpropState {
 public:
  explicit RpropState(const ParameterSet& like, RpropParams params = {});

  const RpropParams& params() const { return params_; }
  std::span<const double> steps() const { return steps_; }
  std::span<const double> previous_gradient() const { return previous_; }

 private:
  friend void rprop_step(ParameterSet&, const ParameterSet&, RpropState&);

  RpropParams params_;
  std::vector<double> steps_;
  std::vector<double> previous_;
};

/// One sign-based update of `weights` in place. Throws Error on a shape mismatch.
void rprop_step(ParameterSet& weights, const ParameterSet& gradient, RpropState& state);
inline void rprop_step(Mlp& mlp, const ParameterSet& gradient, RpropState& state) {
  rprop_step(mlp.params(), gradient, state);
}

// ---------------------------------------------------------------------------

struct TrainConfig {
  double goal = 0.0;
  std::size_t max_epochs = 5000;
  std::size_t max_fail = 6;
  double min_grad = 1e-6;
  double val_fraction = 0.15;
  std::uint64_t seed = 0;
  /// Recorded for reference only; RPROP adapts its own step sizes.
  double learning_rate = 0.01;
  RpropParams rprop{};

  /// Throws Error unless max_fail >= 1, max_epochs >= 1, 0 <= val_fraction < 1, min_grad > 0.
  void validate() const;
};

enum class StopReason { Goal, MaxFail, MinGrad, MaxEpochs };

std::string_view stop_reason_name(StopReason r);

struct EpochRecord {
  double train_mse = 0.0;
  double val_mse = 0.0;       // NaN without a validation set
  double best_val_mse = 0.0;  // NaN without a validation set
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  StopReason stop_reason = StopReason::MaxEpochs;
  std::size_t epochs_used = 0;
  std::size_t best_epoch = 0;  // 1-based epoch whose weights were returned
  double final_train_mse = 0.0;  // training MSE of the returned weights
  double wall_seconds = 0.0;
};

struct TrainResult {
  Mlp model;
  TrainLog log;
};

/// Each epoch measures training and validation MSE at the current weights,
/// checks the stopping rules (goal, max fail, min gradient, max epochs, in
/// that order) and otherwise applies one RPROP step. On MaxFail the weights of
/// the best-validation epoch are returned; otherwise the final ones.
///
/// This overload holds out floor(val_fraction * |train_set|) rows, chosen with
/// config.seed, for early stopping.
TrainResult train(Mlp mlp, const Dataset& train_set, const TrainConfig& config);

/// Explicit fit/validation sets. An empty validation set disables MaxFail.
TrainResult train(Mlp mlp, const Dataset& fit_set, const Dataset& validation_set, const TrainConfig& config);

/// The (fit, validation) partition used by the single-set train overload.
std::pair<Dataset, Dataset> holdout_split(const Dataset& train_set, double val_fraction, std::uint64_t seed);

}  // namespace attackmap
