#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "attackmap/cli.hpp"
#include "attackmap/experiment.hpp"

namespace py = pybind11;
using namespace attackmap;

namespace {

FeatureRow to_row(const std::vector<double>& v) {
  if (v.size() != kFeatureCount) throw Error("feature row needs exactly 4 values");
  FeatureRow row{};
  std::copy(v.begin(), v.end(), row.begin());
  return row;
}

Dataset make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<std::vector<double>>& targets,
                     TargetMode mode) {
  if (rows.size() != targets.size()) throw Error("rows and targets differ in length");
  Dataset d(mode);
  for (std::size_t i = 0; i < rows.size(); ++i) d.add(to_row(rows[i]), targets[i]);
  return d;
}

py::dict log_dict(const TrainLog& log) {
  py::list train_mse, val_mse;
  for (const auto& e : log.epochs) {
    train_mse.append(e.train_mse);
    val_mse.append(e.val_mse);
  }
  py::dict d;
  d["stop_reason"] = std::string(stop_reason_name(log.stop_reason));
  d["epochs_used"] = log.epochs_used;
  d["best_epoch"] = log.best_epoch;
  d["final_train_mse"] = log.final_train_mse;
  d["wall_seconds"] = log.wall_seconds;
  d["train_mse"] = train_mse;
  d["val_mse"] = val_mse;
  return d;
}

TrainConfig make_config(std::uint64_t seed, std::size_t max_epochs, std::size_t max_fail, double min_grad,
                        double val_fraction, double goal) {
  TrainConfig c;
  c.seed = seed;
  c.max_epochs = max_epochs;
  c.max_fail = max_fail;
  c.min_grad = min_grad;
  c.val_fraction = val_fraction;
  c.goal = goal;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Attack pattern to security-pattern group matching with a small feed-forward network";

  // Registered last is tried first, so ParseError wins over its base.
  const auto& error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());

  py::enum_<Stride>(m, "Stride")
      .value("Spoofing", Stride::Spoofing)
      .value("Tampering", Stride::Tampering)
      .value("Repudiation", Stride::Repudiation)
      .value("InformationDisclosure", Stride::InformationDisclosure)
      .value("DenialOfService", Stride::DenialOfService)
      .value("ElevationOfPrivilege", Stride::ElevationOfPrivilege);

  py::enum_<TargetMode>(m, "TargetMode").value("Scalar", TargetMode::Scalar).value("OneHot", TargetMode::OneHot);

  m.def(
      "parse_pattern",
      [](std::string_view text) {
        std::vector<std::pair<std::string, bool>> steps;
        for (const auto& s : parse_pattern(text).steps) steps.emplace_back(s.component, s.quantifier == Quantifier::OneOrMore);
        return steps;
      },
      "Parses `(A+)(B)...` into (component, one_or_more) pairs.");

  py::class_<Catalog>(m, "Catalog")
      .def_property_readonly("pattern_count", [](const Catalog& c) { return c.patterns().size(); })
      .def("histogram",
           [](const Catalog& c) {
             std::vector<std::pair<char, std::size_t>> out;
             const auto h = stride_histogram(c);
             for (auto s : kAllStride) out.emplace_back(stride_letter(s), h[group_id(s) - 1]);
             return out;
           })
      .def("group_members", [](const Catalog& c, int group) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& p : c.group_members(group)) out.emplace_back(p.name, std::string(source_name(p.source)));
        return out;
      });

  m.def(
      "load_catalog",
      [](std::string_view catalog_text, std::string_view registry_text) {
        return load_catalog(catalog_text, load_registry(registry_text));
      },
      py::arg("catalog_text"), py::arg("registry_text"));

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("rows"), py::arg("targets"), py::arg("mode") = TargetMode::Scalar)
      .def("__len__", &Dataset::size)
      .def_property_readonly("mode", &Dataset::mode)
      .def_property_readonly("rows",
                             [](const Dataset& d) {
                               std::vector<std::vector<double>> out;
                               for (const auto& r : d.rows()) out.emplace_back(r.begin(), r.end());
                               return out;
                             })
      .def_property_readonly("targets",
                             [](const Dataset& d) {
                               std::vector<std::vector<double>> out;
                               for (std::size_t i = 0; i < d.size(); ++i) {
                                 const auto t = d.target(i);
                                 out.emplace_back(t.begin(), t.end());
                               }
                               return out;
                             })
      .def(py::self == py::self);

  m.def("build_dataset", &build_dataset, py::arg("catalog"), py::arg("mode") = TargetMode::Scalar,
        py::arg("keep_attack_id") = true);
  m.def("write_csv", &write_csv, py::arg("dataset"), py::arg("header") = false);
  m.def("read_csv", &read_csv, py::arg("text"), py::arg("mode") = TargetMode::Scalar, py::arg("header") = false);
  m.def("split", &split, py::arg("dataset"), py::arg("n_test"), py::arg("seed"),
        "Returns (train, test); both keep the original row order.");
  m.def("encode_target", &encode_target, py::arg("group_id"), py::arg("mode"));
  m.def(
      "decode_output", [](const std::vector<double>& out, TargetMode mode) { return decode_output(out, mode); },
      py::arg("output"), py::arg("mode"));

  py::class_<Model>(m, "Model")
      .def_readonly("mode", &Model::mode)
      .def_property_readonly("layers",
                             [](const Model& mdl) {
                               const auto& s = mdl.network.sizes();
                               return std::vector<std::size_t>{s.inputs, s.hidden, s.outputs};
                             })
      .def_property_readonly("normalized", [](const Model& mdl) { return mdl.normalization.has_value(); })
      .def("predict", [](const Model& mdl, const std::vector<double>& row) { return mdl.predict(to_row(row)); })
      .def("save", &save_model)
      .def_static("load", &load_model, py::arg("text"))
      .def(py::self == py::self);

  m.def(
      "train_model",
      [](const Dataset& data, std::size_t hidden, std::uint64_t seed, std::size_t max_epochs, std::size_t max_fail,
         double min_grad, double val_fraction, double goal, bool normalize) {
        const auto config = make_config(seed, max_epochs, max_fail, min_grad, val_fraction, goal);
        std::pair<Model, TrainLog> result{Model{Mlp({kFeatureCount, 1, 1}, OutputActivation::Linear)}, {}};
        {
          py::gil_scoped_release release;
          result = train_model(data, hidden, config, normalize);
        }
        return std::make_pair(std::move(result.first), log_dict(result.second));
      },
      py::arg("dataset"), py::arg("hidden") = 90, py::arg("seed") = 0, py::arg("max_epochs") = 5000,
      py::arg("max_fail") = 6, py::arg("min_grad") = 1e-6, py::arg("val_fraction") = 0.15, py::arg("goal") = 0.0,
      py::arg("normalize") = true, "Returns (model, log dict).");

  m.def(
      "evaluate",
      [](const Model& model, const Dataset& test_set) {
        const auto table = evaluate(model, test_set);
        py::list rows;
        for (const auto& r : table.rows) {
          rows.append(py::make_tuple(r.actual, r.expected_group, r.decoded_group, r.match));
        }
        py::dict d;
        d["rows"] = rows;
        d["matches"] = table.matches();
        d["accuracy"] = table.accuracy();
        return d;
      },
      py::arg("model"), py::arg("test_set"));

  m.def(
      "run_sweep",
      [](const Dataset& data, const std::vector<std::size_t>& hidden, std::size_t runs, std::uint64_t master_seed,
         std::size_t max_epochs, unsigned threads) {
        auto config = make_config(0, max_epochs, 6, 1e-6, 0.15, 0.0);
        SweepOptions options;
        options.threads = threads;
        SweepReport report;
        {
          py::gil_scoped_release release;
          report = run_sweep(data, hidden, runs, config, master_seed, options);
        }
        py::list rows;
        for (const auto& r : report.rows) {
          py::dict d;
          d["hidden"] = r.hidden;
          d["mean_mse"] = r.mean_mse;
          d["mean_epochs"] = r.mean_epochs;
          d["mean_seconds"] = r.mean_seconds;
          rows.append(d);
        }
        return rows;
      },
      py::arg("dataset"), py::arg("hidden") = std::vector<std::size_t>{80, 90, 100, 110, 120}, py::arg("runs") = 5,
      py::arg("master_seed") = 0, py::arg("max_epochs") = 5000, py::arg("threads") = 0);

  m.def(
      "recommend",
      [](const Model& model, const std::vector<double>& features, const Catalog& catalog) {
        const auto rec = recommend(model, to_row(features), catalog);
        py::dict d;
        d["group_id"] = rec.group_id;
        d["category"] = rec.category_name;
        d["raw_output"] = rec.raw_output;
        std::vector<std::string> members;
        for (const auto& p : rec.members) members.push_back(p.name);
        d["members"] = members;
        d["warnings"] = rec.warnings;
        return d;
      },
      py::arg("model"), py::arg("features"), py::arg("catalog"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::dispatch(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one command-line invocation; returns (exit_code, stdout, stderr).");
}
