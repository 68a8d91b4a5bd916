#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rbfn/cli.hpp"
#include "rbfn/dataset.hpp"
#include "rbfn/eval.hpp"
#include "rbfn/kmeans.hpp"
#include "rbfn/model_io.hpp"
#include "rbfn/rbfnet.hpp"
#include "rbfn/synth.hpp"

namespace py = pybind11;
using namespace rbfn;

namespace {

Encoded load_dataset(const std::string& path, const std::string& target,
                     const std::vector<std::string>& features) {
  ParseResult parsed = parse_csv_file(path);
  return encode(parsed.records, target_from_string(target),
                features.empty() ? default_feature_set() : features);
}

TrainConfig make_config(std::size_t hidden, const std::string& centers,
                        const std::string& spread_mode, double lambda, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.hidden = hidden;
  cfg.centers = center_strategy_from_string(centers);
  cfg.spread_mode = spread_mode_from_string(spread_mode);
  cfg.lambda = lambda;
  cfg.seed = seed;
  return cfg;
}

py::dict metrics_dict(const Metrics& m, const std::vector<std::string>& class_names) {
  py::dict d;
  d["n"] = m.n;
  d["accuracy"] = m.accuracy;
  d["confusion"] = m.confusion;
  py::list per_class;
  for (std::size_t c = 0; c < m.per_class.size(); ++c) {
    py::dict s;
    s["class"] = class_names.empty() ? std::to_string(c) : class_names[c];
    s["sensitivity"] = m.per_class[c].sensitivity;
    s["specificity"] = m.per_class[c].specificity;
    s["sensitivity_degenerate"] = m.per_class[c].sensitivity_degenerate;
    s["specificity_degenerate"] = m.per_class[c].specificity_degenerate;
    per_class.append(s);
  }
  d["per_class"] = per_class;
  return d;
}

}  // namespace

PYBIND11_MODULE(_rbfn, m) {
  m.doc() = "RBF network classification toolkit for tabular clinical records";

  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<IoError>(m, "IoError");

  py::class_<FeatureMatrix>(m, "FeatureMatrix")
      .def(py::init([](Mat values, std::vector<std::string> names) {
             return FeatureMatrix{std::move(values), std::move(names)};
           }),
           py::arg("values"), py::arg("feature_names") = std::vector<std::string>{})
      .def_readwrite("values", &FeatureMatrix::values)
      .def_readwrite("feature_names", &FeatureMatrix::feature_names)
      .def_property_readonly("shape", [](const FeatureMatrix& f) {
        return py::make_tuple(f.rows(), f.cols());
      });

  py::class_<LabelVector>(m, "LabelVector")
      .def(py::init([](std::vector<int> indices, std::vector<std::string> names) {
             return LabelVector{std::move(indices), std::move(names)};
           }),
           py::arg("indices"), py::arg("class_names"))
      .def_readwrite("indices", &LabelVector::indices)
      .def_readwrite("class_names", &LabelVector::class_names);

  py::class_<Encoded>(m, "Dataset")
      .def_readwrite("features", &Encoded::features)
      .def_readwrite("labels", &Encoded::labels);

  py::class_<Scaler>(m, "Scaler")
      .def(py::init<>())
      .def_readwrite("medians", &Scaler::medians)
      .def_readwrite("iqrs", &Scaler::iqrs);

  m.def("load_dataset", &load_dataset, py::arg("path"), py::arg("target") = "prolong",
        py::arg("features") = std::vector<std::string>{},
        "Parse a patient CSV and encode features and labels");

  m.def("fit_scaler", &fit_scaler, py::arg("features"));
  m.def("transform", py::overload_cast<const Scaler&, const FeatureMatrix&>(&transform),
        py::arg("scaler"), py::arg("features"));

  m.def(
      "kmeans",
      [](const Mat& points, std::size_t k, std::uint64_t seed, std::size_t max_iter, double tol) {
        Clustering c = kmeans(points, k, seed, {max_iter, tol});
        py::dict d;
        d["centers"] = c.centers;
        d["assignments"] = c.assignments;
        d["inertia"] = c.inertia;
        d["iterations"] = c.iterations;
        d["converged"] = c.converged;
        return d;
      },
      py::arg("points"), py::arg("k"), py::arg("seed") = 0, py::arg("max_iter") = 100,
      py::arg("tol") = 1e-9);

  m.def("random_subset_centers", &random_subset_centers, py::arg("points"), py::arg("k"),
        py::arg("seed") = 0);

  py::class_<RbfModel>(m, "RbfModel")
      .def_readonly("centers", &RbfModel::centers)
      .def_readonly("spreads", &RbfModel::spreads)
      .def_readonly("weights", &RbfModel::weights)
      .def_readonly("class_names", &RbfModel::class_names)
      .def_readonly("feature_names", &RbfModel::feature_names)
      .def_property_readonly("hidden_units", &RbfModel::hidden_units)
      .def("predict_proba",
           [](const RbfModel& model, const std::vector<double>& x) {
             return predict_proba(model, x);
           })
      .def("predict",
           [](const RbfModel& model, const std::vector<double>& x) { return predict(model, x); })
      .def("save", [](const RbfModel& model, const std::string& path) { save_rbf(model, path); })
      .def_static("load", &load_rbf, py::arg("path"))
      .def("to_json", [](const RbfModel& model) { return to_json(model); });

  m.def(
      "train_rbf",
      [](const FeatureMatrix& features, const LabelVector& labels, std::size_t hidden,
         const std::string& centers, const std::string& spread_mode, double lambda,
         std::uint64_t seed) {
        return train(features, labels, make_config(hidden, centers, spread_mode, lambda, seed));
      },
      py::arg("features"), py::arg("labels"), py::arg("hidden") = 10,
      py::arg("centers") = "kmeans", py::arg("spread_mode") = "scalar",
      py::arg("lambda") = 1e-8, py::arg("seed") = 0);

  m.def(
      "select_hidden_size",
      [](const FeatureMatrix& features, const LabelVector& labels,
         const std::vector<std::size_t>& grid, std::size_t folds, std::uint64_t seed) {
        HiddenSizeChoice c = select_hidden_size(features, labels, grid, folds, seed);
        py::list table;
        for (const auto& row : c.table) {
          py::dict d;
          d["hidden"] = row.hidden;
          d["mean_accuracy"] = row.mean_accuracy;
          d["std_error"] = row.std_error;
          table.append(d);
        }
        return py::make_tuple(c.chosen, table);
      },
      py::arg("features"), py::arg("labels"), py::arg("grid"), py::arg("folds") = 5,
      py::arg("seed") = 0);

  py::class_<LogisticModel>(m, "LogisticModel")
      .def_readonly("weights", &LogisticModel::weights)
      .def_readonly("class_names", &LogisticModel::class_names);
  py::class_<MlpModel>(m, "MlpModel")
      .def_readonly("hidden_weights", &MlpModel::hidden_weights)
      .def_readonly("output_weights", &MlpModel::output_weights)
      .def_readonly("class_names", &MlpModel::class_names);

  m.def(
      "logistic_train",
      [](const FeatureMatrix& features, const LabelVector& labels, double lr, std::size_t epochs) {
        return logistic_train(features, labels, {lr, epochs, 0});
      },
      py::arg("features"), py::arg("labels"), py::arg("lr") = 0.1, py::arg("epochs") = 1000,
      "Full-batch gradient descent on standardized features");
  m.def(
      "mlp_train",
      [](const FeatureMatrix& features, const LabelVector& labels, std::size_t hidden, double lr,
         std::size_t epochs, std::uint64_t seed) {
        return mlp_train(features, labels, {hidden, lr, epochs, seed});
      },
      py::arg("features"), py::arg("labels"), py::arg("hidden") = 8, py::arg("lr") = 0.1,
      py::arg("epochs") = 2000, py::arg("seed") = 0);

  m.def(
      "baseline_predict",
      [](const LogisticModel& model, const std::vector<double>& x, const Scaler& scaler) {
        BaselinePrediction p = baseline_predict(model, x, scaler);
        return py::make_tuple(p.label, p.probabilities);
      },
      py::arg("model"), py::arg("x"), py::arg("scaler"));
  m.def(
      "baseline_predict",
      [](const MlpModel& model, const std::vector<double>& x, const Scaler& scaler) {
        BaselinePrediction p = baseline_predict(model, x, scaler);
        return py::make_tuple(p.label, p.probabilities);
      },
      py::arg("model"), py::arg("x"), py::arg("scaler"));

  m.def(
      "train_test_split",
      [](const LabelVector& labels, std::size_t n_train, std::uint64_t seed) {
        Split s = train_test_split(labels, n_train, seed);
        return py::make_tuple(s.train_indices, s.test_indices);
      },
      py::arg("labels"), py::arg("n_train"), py::arg("seed") = 0);

  m.def(
      "compute_metrics",
      [](const std::vector<int>& truth, const std::vector<int>& predicted, std::size_t n_classes,
         const std::vector<std::string>& class_names) {
        return metrics_dict(compute_metrics(truth, predicted, n_classes), class_names);
      },
      py::arg("truth"), py::arg("predicted"), py::arg("n_classes"),
      py::arg("class_names") = std::vector<std::string>{});

  m.def(
      "generate_patient_csv",
      [](const std::string& path, std::size_t n, std::uint64_t seed, double noise) {
        SyntheticSpec spec;
        spec.n = n;
        spec.seed = seed;
        spec.label_noise = noise;
        write_patient_csv_file(path, generate_patients(spec));
      },
      py::arg("path"), py::arg("n") = 500, py::arg("seed") = 0, py::arg("noise") = 0.0,
      "Write a seeded synthetic patient CSV");

  m.def("cli_run", [](const std::vector<std::string>& args) { return rbfn::cli::run(args); });
}
