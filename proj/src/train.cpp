#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "attackmap/neuralnet.hpp"

namespace attackmap {

void TrainConfig::validate() const {
  if (max_fail < 1) throw Error("max_fail must be >= 1");
  if (max_epochs < 1) throw Error("max_epochs must be >= 1");
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) throw Error("val_fraction must be in [0, 1)");
  if (!(min_grad > 0.0)) throw Error("min_grad must be > 0");
  if (!std::isfinite(goal) || goal < 0.0) throw Error("goal must be a finite MSE >= 0");
  rprop.validate();
}

std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Goal: return "goal";
    case StopReason::MaxFail: return "max_fail";
    case StopReason::MinGrad: return "min_grad";
    case StopReason::MaxEpochs: return "max_epochs";
  }
  return "?";
}

std::pair<Dataset, Dataset> holdout_split(const Dataset& train_set, double val_fraction, std::uint64_t seed) {
  const auto n_val = static_cast<std::size_t>(std::floor(val_fraction * static_cast<double>(train_set.size())));
  return split(train_set, n_val, seed);
}

TrainResult train(Mlp mlp, const Dataset& train_set, const TrainConfig& config) {
  config.validate();
  if (train_set.empty()) throw Error("empty training set");
  auto [fit, validation] = holdout_split(train_set, config.val_fraction, config.seed);
  if (fit.empty()) throw Error("validation hold-out leaves no training rows");
  return train(std::move(mlp), fit, validation, config);
}

TrainResult train(Mlp mlp, const Dataset& fit_set, const Dataset& validation_set, const TrainConfig& config) {
  config.validate();
  if (fit_set.empty()) throw Error("empty training set");
  if (!validation_set.empty() && validation_set.mode() != fit_set.mode()) {
    throw Error("training and validation sets use different target modes");
  }
  const auto start = std::chrono::steady_clock::now();
  const bool validate = !validation_set.empty();
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  TrainLog log;
  RpropState rprop(mlp.params(), config.rprop);
  Mlp best = mlp;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t fails = 0;

  for (std::size_t epoch = 1;; ++epoch) {
    auto [gradient, train_mse] = backprop_full_batch(mlp, fit_set);
    double val_mse = kNaN;
    if (validate) {
      val_mse = mse(predict_all(mlp, validation_set), validation_set.targets());
      if (val_mse < best_val) {
        best_val = val_mse;
        best = mlp;
        log.best_epoch = epoch;
        fails = 0;
      } else {
        ++fails;
      }
    } else {
      log.best_epoch = epoch;
    }
    log.epochs.push_back({train_mse, val_mse, validate ? best_val : kNaN});

    std::optional<StopReason> stop;
    if (train_mse <= config.goal) {
      stop = StopReason::Goal;
    } else if (validate && fails >= config.max_fail) {
      stop = StopReason::MaxFail;
    } else if (gradient.max_abs() < config.min_grad) {
      stop = StopReason::MinGrad;
    } else if (epoch >= config.max_epochs) {
      stop = StopReason::MaxEpochs;
    }

    if (stop) {
      log.stop_reason = *stop;
      log.epochs_used = epoch;
      if (*stop == StopReason::MaxFail) {
        mlp = std::move(best);
      } else {
        log.best_epoch = epoch;
      }
      log.final_train_mse = log.epochs[log.best_epoch - 1].train_mse;
      break;
    }
    rprop_step(mlp, gradient, rprop);
  }

  log.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(mlp), std::move(log)};
}

}  // namespace attackmap
