#include "rbfn/cli.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbfn/dataset.hpp"
#include "rbfn/eval.hpp"
#include "rbfn/model_io.hpp"
#include "rbfn/rbfnet.hpp"
#include "rbfn/synth.hpp"

namespace rbfn::cli {

namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string subcommand;
  std::string data;
  std::string model;
  std::string target = "prolong";
  std::size_t hidden = 10;
  std::vector<std::size_t> hidden_grid;
  std::string centers = "kmeans";
  std::string spread_mode = "scalar";
  double lambda = 1e-8;
  std::size_t folds = 5;
  std::size_t n_train = 0;
  std::uint64_t seed = 0;
  std::string out;
  // gen-data
  std::size_t n = 500;
  double noise = 0.0;
  double cd4_low = 50.0;
  double cd4_high = 100.0;
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

TrainConfig make_train_config(const RunConfig& cfg) {
  TrainConfig tc;
  tc.hidden = cfg.hidden;
  tc.centers = center_strategy_from_string(cfg.centers);
  tc.spread_mode = spread_mode_from_string(cfg.spread_mode);
  tc.lambda = cfg.lambda;
  tc.seed = cfg.seed;
  return tc;
}

json config_json(const RunConfig& cfg) {
  json j;
  j["subcommand"] = cfg.subcommand;
  if (!cfg.data.empty()) j["data"] = cfg.data;
  if (!cfg.model.empty()) j["model"] = cfg.model;
  j["target"] = cfg.target;
  if (cfg.subcommand == "train" || cfg.subcommand == "evaluate" || cfg.subcommand == "cv" ||
      cfg.subcommand == "compare") {
    j["hidden"] = cfg.hidden;
    if (!cfg.hidden_grid.empty()) j["hidden_grid"] = cfg.hidden_grid;
    j["centers"] = cfg.centers;
    j["spread_mode"] = cfg.spread_mode;
    j["lambda"] = cfg.lambda;
  }
  if (cfg.subcommand == "train" || cfg.subcommand == "cv") j["folds"] = cfg.folds;
  if (cfg.subcommand == "evaluate" || cfg.subcommand == "compare") j["n_train"] = cfg.n_train;
  if (cfg.subcommand == "gen-data") {
    j["n"] = cfg.n;
    j["noise"] = cfg.noise;
    j["cd4_low"] = cfg.cd4_low;
    j["cd4_high"] = cfg.cd4_high;
  }
  j["seed"] = cfg.seed;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  return j;
}

double training_accuracy(const RbfModel& model, const FeatureMatrix& m, const LabelVector& y) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (predict(model, m.values[i]) == y.indices[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(m.rows());
}

int cmd_train(const RunConfig& cfg) {
  ParseResult parsed = parse_csv_file(cfg.data);
  print_warnings(parsed.warnings);
  Encoded enc = encode(parsed.records, target_from_string(cfg.target));

  TrainConfig tc = make_train_config(cfg);
  json cv_table = json::array();
  if (!cfg.hidden_grid.empty()) {
    HiddenSizeChoice choice =
        select_hidden_size(enc.features, enc.labels, cfg.hidden_grid, cfg.folds, cfg.seed, tc);
    tc.hidden = choice.chosen;
    for (const auto& row : choice.table)
      cv_table.push_back({{"hidden", row.hidden},
                          {"mean_accuracy", row.mean_accuracy},
                          {"std_error", row.std_error}});
  }

  RbfModel model = train(enc.features, enc.labels, tc);
  save_rbf(model, cfg.model);

  double acc = training_accuracy(model, enc.features, enc.labels);
  json manifest;
  manifest["format_version"] = kModelFormatVersion;
  manifest["config"] = config_json(cfg);
  manifest["config"]["hidden"] = tc.hidden;  // chosen J when a grid was given
  manifest["seed"] = cfg.seed;
  manifest["metrics"]["training_accuracy"] = acc;
  if (!cfg.hidden_grid.empty()) manifest["metrics"]["cv_table"] = cv_table;

  const std::string manifest_path = cfg.out.empty() ? cfg.model + ".manifest.json" : cfg.out;
  write_text_file(manifest_path, manifest.dump(2) + "\n");

  std::cout << "wrote model " << cfg.model << " (hidden=" << tc.hidden
            << ", training accuracy " << fmt_double(acc) << ")\n";
  return 0;
}

int cmd_predict(const RunConfig& cfg) {
  RbfModel model = load_rbf(cfg.model);
  ParseResult parsed = parse_csv_file(cfg.data);
  print_warnings(parsed.warnings);

  FeatureMatrix features;
  try {
    features = encode_features(parsed.records, model.feature_names);
  } catch (const ValidationError& e) {
    std::string expected;
    for (const auto& f : model.feature_names) expected += (expected.empty() ? "" : ",") + f;
    throw ValidationError("feature mismatch: model expects [" + expected + "]: " + e.what());
  }

  std::ostringstream out;
  out << "id,predicted_class";
  for (const auto& name : model.class_names) out << ",p_" << name;
  out << "\n";
  for (std::size_t i = 0; i < parsed.records.size(); ++i) {
    std::vector<double> proba = predict_proba(model, features.values[i]);
    std::size_t best = 0;
    for (std::size_t l = 1; l < proba.size(); ++l)
      if (proba[l] > proba[best]) best = l;
    out << parsed.records[i].id << "," << model.class_names[best];
    for (double p : proba) out << "," << fmt_double(p);
    out << "\n";
  }
  write_text_file(cfg.out, out.str());
  std::cout << "wrote predictions for " << parsed.records.size() << " records to " << cfg.out
            << "\n";
  return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
  ParseResult parsed = parse_csv_file(cfg.data);
  print_warnings(parsed.warnings);
  Encoded enc = encode(parsed.records, target_from_string(cfg.target));

  Split split = train_test_split(enc.labels, cfg.n_train, cfg.seed);
  print_warnings(split.warnings);

  RbfModel model =
      train(take_rows(enc.features, split.train_indices),
            take_labels(enc.labels, split.train_indices), make_train_config(cfg));

  std::vector<int> truth, predicted;
  for (std::size_t idx : split.test_indices) {
    truth.push_back(enc.labels.indices[idx]);
    predicted.push_back(predict(model, enc.features.values[idx]));
  }
  Metrics metrics = compute_metrics(truth, predicted, enc.labels.class_names.size());

  write_text_file(cfg.out, metrics_csv(metrics, enc.labels.class_names));
  std::cout << metrics_text(metrics, enc.labels.class_names);
  return 0;
}

int cmd_cv(const RunConfig& cfg) {
  ParseResult parsed = parse_csv_file(cfg.data);
  print_warnings(parsed.warnings);
  Encoded enc = encode(parsed.records, target_from_string(cfg.target));

  TrainConfig tc = make_train_config(cfg);
  Trainer trainer = [&tc](const FeatureMatrix& m, const LabelVector& y) -> Predictor {
    RbfModel model = train(m, y, tc);
    return [model](const std::vector<double>& x) { return predict(model, x); };
  };
  CvResult cv = kfold_cv(enc.features, enc.labels, cfg.folds, trainer, cfg.seed);

  std::ostringstream out;
  out << "fold,n,accuracy\n";
  for (std::size_t f = 0; f < cv.fold_metrics.size(); ++f)
    out << f << "," << cv.fold_metrics[f].n << "," << fmt_double(cv.fold_metrics[f].accuracy)
        << "\n";
  out << "mean,," << fmt_double(cv.mean_accuracy) << "\n";
  out << "std,," << fmt_double(cv.std_accuracy) << "\n";
  write_text_file(cfg.out, out.str());

  std::cout << cfg.folds << "-fold CV accuracy " << fmt_double(cv.mean_accuracy) << " +- "
            << fmt_double(cv.std_accuracy) << "\n";
  return 0;
}

std::string timing_path_for(const std::string& out) {
  auto dot = out.rfind('.');
  if (dot == std::string::npos || out.find('/', dot) != std::string::npos)
    return out + "_timing.csv";
  return out.substr(0, dot) + "_timing" + out.substr(dot);
}

int cmd_compare(const RunConfig& cfg) {
  ParseResult parsed = parse_csv_file(cfg.data);
  print_warnings(parsed.warnings);
  Encoded enc = encode(parsed.records, target_from_string(cfg.target));

  ComparisonTable table = compare_models(enc.features, enc.labels, make_train_config(cfg),
                                         MlpConfig{}, LogisticConfig{}, cfg.n_train, cfg.seed);
  print_warnings(table.split.warnings);

  write_text_file(cfg.out, comparison_csv(table, enc.labels.class_names));
  write_text_file(timing_path_for(cfg.out), timing_csv(table));
  std::cout << comparison_text(table, enc.labels.class_names);
  return 0;
}

int cmd_gen_data(const RunConfig& cfg) {
  SyntheticSpec spec;
  spec.n = cfg.n;
  spec.seed = cfg.seed;
  spec.label_noise = cfg.noise;
  spec.cd4_low_threshold = cfg.cd4_low;
  spec.cd4_high_threshold = cfg.cd4_high;
  write_patient_csv_file(cfg.out, generate_patients(spec));
  std::cout << "wrote " << cfg.n << " synthetic records to " << cfg.out << "\n";
  return 0;
}

int dispatch(CLI::App& app, const RunConfig& cfg) {
  if (app.got_subcommand("train")) return cmd_train(cfg);
  if (app.got_subcommand("predict")) return cmd_predict(cfg);
  if (app.got_subcommand("evaluate")) return cmd_evaluate(cfg);
  if (app.got_subcommand("cv")) return cmd_cv(cfg);
  if (app.got_subcommand("compare")) return cmd_compare(cfg);
  if (app.got_subcommand("gen-data")) return cmd_gen_data(cfg);
  std::cerr << app.help();
  return 1;
}

void add_rbf_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--hidden", cfg.hidden, "number of hidden units J");
  cmd->add_option("--centers", cfg.centers, "center strategy: kmeans or random_subset");
  cmd->add_option("--spread-mode", cfg.spread_mode, "spread mode: scalar or per_dimension");
  cmd->add_option("--lambda", cfg.lambda, "ridge coefficient for the output-weight fit");
}

}  // namespace

int run(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"radial basis function network classifier for tabular clinical records"};
  app.require_subcommand(0, 1);

  CLI::App* train_cmd = app.add_subcommand("train", "fit an RBF model and write it as JSON");
  train_cmd->add_option("--data", cfg.data, "training CSV")->required();
  train_cmd->add_option("--model", cfg.model, "output model path")->required();
  train_cmd->add_option("--target", cfg.target, "label column: prolong or regimen");
  train_cmd->add_option("--hidden-grid", cfg.hidden_grid, "candidate J values for CV selection")
      ->delimiter(',');
  train_cmd->add_option("--folds", cfg.folds, "CV folds used with --hidden-grid");
  train_cmd->add_option("--seed", cfg.seed, "PRNG seed");
  train_cmd->add_option("--out", cfg.out, "manifest path (default: <model>.manifest.json)");
  add_rbf_options(train_cmd, cfg);

  CLI::App* predict_cmd = app.add_subcommand("predict", "classify records with a saved model");
  predict_cmd->add_option("--data", cfg.data, "input CSV")->required();
  predict_cmd->add_option("--model", cfg.model, "model path")->required();
  predict_cmd->add_option("--out", cfg.out, "output CSV")->required();

  CLI::App* eval_cmd = app.add_subcommand("evaluate", "train/test split evaluation");
  eval_cmd->add_option("--data", cfg.data, "input CSV")->required();
  eval_cmd->add_option("--target", cfg.target, "label column: prolong or regimen");
  eval_cmd->add_option("--n-train", cfg.n_train, "training set size")->required();
  eval_cmd->add_option("--seed", cfg.seed, "PRNG seed");
  eval_cmd->add_option("--out", cfg.out, "metrics CSV path")->required();
  add_rbf_options(eval_cmd, cfg);

  CLI::App* cv_cmd = app.add_subcommand("cv", "stratified k-fold cross-validation");
  cv_cmd->add_option("--data", cfg.data, "input CSV")->required();
  cv_cmd->add_option("--target", cfg.target, "label column: prolong or regimen");
  cv_cmd->add_option("--folds", cfg.folds, "fold count");
  cv_cmd->add_option("--seed", cfg.seed, "PRNG seed");
  cv_cmd->add_option("--out", cfg.out, "per-fold metrics CSV path")->required();
  add_rbf_options(cv_cmd, cfg);

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "compare RBF, MLP and logistic on one split");
  compare_cmd->add_option("--data", cfg.data, "input CSV")->required();
  compare_cmd->add_option("--target", cfg.target, "label column: prolong or regimen");
  compare_cmd->add_option("--n-train", cfg.n_train, "training set size")->required();
  compare_cmd->add_option("--seed", cfg.seed, "PRNG seed");
  compare_cmd->add_option("--out", cfg.out, "comparison CSV path")->required();
  add_rbf_options(compare_cmd, cfg);

  CLI::App* gen_cmd = app.add_subcommand("gen-data", "generate a synthetic patient CSV");
  gen_cmd->add_option("--out", cfg.out, "output CSV path")->required();
  gen_cmd->add_option("--n", cfg.n, "record count");
  gen_cmd->add_option("--seed", cfg.seed, "PRNG seed");
  gen_cmd->add_option("--noise", cfg.noise, "label flip probability in [0, 0.5)");
  gen_cmd->add_option("--cd4-low", cfg.cd4_low, "CD4 threshold for the '<50%' label");
  gen_cmd->add_option("--cd4-high", cfg.cd4_high, "CD4 threshold for the '>75%' label");

  try {
    app.parse(argc, argv);
    for (CLI::App* sub : app.get_subcommands())
      cfg.subcommand = sub->get_name();
    return dispatch(app, cfg);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("rbfn");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace rbfn::cli
