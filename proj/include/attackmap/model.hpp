#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attackmap/encoder.hpp"
#include "attackmap/neuralnet.hpp"

namespace attackmap {

/// A trained network plus the input scaling it was trained with.
struct Model {
  Mlp network;
  TargetMode mode = TargetMode::Scalar;
  std::optional<NormalizationParams> normalization;

  /// Raw feature row -> network output (normalizing first when configured).
  std::vector<double> predict(const FeatureRow& raw) const;

  bool operator==(const Model&) const = default;
};

/// Text model file:
///
///   mode scalar
///   layers 4,90,1
///   activation linear
///   normalization minmax        (or: normalization none)
///   0,<min>,<max>               (one line per input column)
///   ...
///   hidden_weights 360
///   <one value per line, 17 significant digits>
///   hidden_biases 90
///   output_weights 90
///   output_biases 1
std::string save_model(const Model& model);

/// Throws ParseError (1-based line) on a malformed file, including a
/// `normalization minmax` header without its parameter lines.
Model load_model(std::string_view text);

}  // namespace attackmap
