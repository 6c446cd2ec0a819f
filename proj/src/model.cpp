#include "attackmap/model.hpp"

#include <string>

#include "text_util.hpp"

namespace attackmap {

std::vector<double> Model::predict(const FeatureRow& raw) const {
  return forward(network, normalization ? normalization->apply(raw) : raw);
}

std::string save_model(const Model& model) {
  const auto& s = model.network.sizes();
  std::string out;
  out += "mode " + std::string(mode_name(model.mode)) + '\n';
  out += "layers " + std::to_string(s.inputs) + ',' + std::to_string(s.hidden) + ',' + std::to_string(s.outputs) + '\n';
  out += "activation " + std::string(activation_name(model.network.activation())) + '\n';
  if (model.normalization) {
    out += "normalization minmax\n";
    out += write_normalization(*model.normalization);
  } else {
    out += "normalization none\n";
  }
  const auto& p = model.network.params();
  const auto section = [&](const char* name, std::span<const double> values) {
    out += std::string(name) + ' ' + std::to_string(values.size()) + '\n';
    for (double v : values) out += detail::format_17g(v) + '\n';
  };
  section("hidden_weights", p.hidden_weights());
  section("hidden_biases", p.hidden_biases());
  section("output_weights", p.output_weights());
  section("output_biases", p.output_biases());
  return out;
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : lines_(detail::lines(text)) {}

  std::string_view next(const char* what) {
    while (pos_ < lines_.size()) {
      const auto line = detail::trim(lines_[pos_++]);
      if (!line.empty() && line.front() != '#') return line;
    }
    throw ParseError("model file ended early, expected " + std::string(what), pos_);
  }

  /// `key value` line; returns value.
  std::string_view keyed(std::string_view key) {
    const auto line = next(std::string(key).c_str());
    if (line.substr(0, key.size()) != key || line.size() <= key.size() || line[key.size()] != ' ') {
      throw error("expected '" + std::string(key) + " ...'");
    }
    return detail::trim(line.substr(key.size() + 1));
  }

  bool at_end() {
    while (pos_ < lines_.size()) {
      const auto line = detail::trim(lines_[pos_]);
      if (!line.empty() && line.front() != '#') return false;
      ++pos_;
    }
    return true;
  }

  ParseError error(const std::string& msg) const {
    return ParseError("model line " + std::to_string(pos_) + ": " + msg, pos_);
  }

 private:
  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

Model load_model(std::string_view text) {
  LineReader in(text);

  const auto mode = mode_from_name(in.keyed("mode"));
  if (!mode) throw in.error("unknown mode");

  const auto dims = detail::split(in.keyed("layers"), ',');
  long long n[3] = {0, 0, 0};
  if (dims.size() != 3) throw in.error("expected 'layers n_in,n_hidden,n_out'");
  for (int i = 0; i < 3; ++i) {
    if (!detail::parse_int(dims[i], n[i]) || n[i] < 1 || n[i] > 1'000'000) throw in.error("invalid layer size");
  }
  const auto activation = activation_from_name(in.keyed("activation"));
  if (!activation) throw in.error("unknown activation");

  Model model{Mlp({static_cast<std::size_t>(n[0]), static_cast<std::size_t>(n[1]), static_cast<std::size_t>(n[2])},
                  *activation),
              *mode, std::nullopt};
  if (!model.network.supports(*mode)) throw in.error("layers/activation do not match the mode");

  const auto norm = in.keyed("normalization");
  if (norm == "minmax") {
    std::string block;
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      const auto line = in.next("normalization parameters");
      if (line.find(',') == std::string_view::npos) throw in.error("missing normalization parameters");
      block += std::string(line) + '\n';
    }
    try {
      model.normalization = read_normalization(block);
    } catch (const Error& e) {
      throw in.error(e.what());
    }
  } else if (norm != "none") {
    throw in.error("normalization must be 'minmax' or 'none'");
  }

  auto& p = model.network.params();
  const auto section = [&](const char* name, std::span<double> values) {
    long long count = 0;
    if (!detail::parse_int(in.keyed(name), count) || count != static_cast<long long>(values.size())) {
      throw in.error(std::string(name) + " must list " + std::to_string(values.size()) + " values");
    }
    for (auto& v : values) {
      if (!detail::parse_double(in.next(name), v)) throw in.error("invalid number in " + std::string(name));
    }
  };
  section("hidden_weights", p.hidden_weights());
  section("hidden_biases", p.hidden_biases());
  section("output_weights", p.output_weights());
  section("output_biases", p.output_biases());
  if (!in.at_end()) throw in.error("unexpected content after output biases");
  return model;
}

}  // namespace attackmap
