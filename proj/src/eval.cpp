#include "rbfn/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace rbfn {

namespace {

std::vector<std::vector<std::size_t>> indices_by_class(const LabelVector& y) {
  std::vector<std::vector<std::size_t>> by_class(y.class_names.size());
  for (std::size_t i = 0; i < y.indices.size(); ++i)
    by_class[static_cast<std::size_t>(y.indices[i])].push_back(i);
  return by_class;
}

}  // namespace

Split train_test_split(const LabelVector& y, std::size_t n_train, std::uint64_t seed) {
  const std::size_t n = y.indices.size();
  if (n_train < 1 || n_train >= n)
    throw ValidationError("n_train must satisfy 1 <= n_train < N (N = " + std::to_string(n) +
                          ")");

  Split split;
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> by_class = indices_by_class(y);

  bool stratifiable = true;
  for (std::size_t c = 0; c < by_class.size(); ++c)
    if (by_class[c].size() < 2) {
      split.warnings.push_back("class '" + y.class_names[c] +
                               "' has fewer than 2 members; falling back to a plain shuffle");
      stratifiable = false;
    }

  if (!stratifiable) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    split.train_indices.assign(order.begin(), order.begin() + static_cast<long>(n_train));
    split.test_indices.assign(order.begin() + static_cast<long>(n_train), order.end());
    return split;
  }

  for (auto& cls : by_class) rng.shuffle(cls);

  // proportional train counts by largest remainder, then clamped so both
  // sides keep at least one member of each class whenever the budget allows
  const std::size_t L = by_class.size();
  std::vector<std::size_t> t(L);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < L; ++c) {
    double exact = static_cast<double>(n_train) * static_cast<double>(by_class[c].size()) /
                   static_cast<double>(n);
    t[c] = static_cast<std::size_t>(exact);
    assigned += t[c];
    remainders.push_back({exact - static_cast<double>(t[c]), c});
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t i = 0; assigned < n_train; ++i, ++assigned) t[remainders[i % L].second] += 1;

  if (n_train >= L && n - n_train >= L) {
    for (std::size_t pass = 0; pass < n; ++pass) {
      bool changed = false;
      for (std::size_t c = 0; c < L && !changed; ++c) {
        if (t[c] == 0) {  // take one from the class with the most slack
          std::size_t donor = L;
          for (std::size_t o = 0; o < L; ++o)
            if (t[o] >= 2 && (donor == L || t[o] > t[donor])) donor = o;
          t[donor] -= 1;
          t[c] += 1;
          changed = true;
        } else if (t[c] == by_class[c].size()) {  // leave one for the test side
          std::size_t taker = L;
          for (std::size_t o = 0; o < L; ++o)
            if (t[o] + 1 < by_class[o].size() && (taker == L || t[o] < t[taker])) taker = o;
          t[c] -= 1;
          t[taker] += 1;
          changed = true;
        }
      }
      if (!changed) break;
    }
  }

  for (std::size_t c = 0; c < L; ++c) {
    for (std::size_t i = 0; i < by_class[c].size(); ++i) {
      if (i < t[c])
        split.train_indices.push_back(by_class[c][i]);
      else
        split.test_indices.push_back(by_class[c][i]);
    }
  }
  return split;
}

FeatureMatrix take_rows(const FeatureMatrix& m, const std::vector<std::size_t>& indices) {
  FeatureMatrix out;
  out.feature_names = m.feature_names;
  out.values.reserve(indices.size());
  for (std::size_t i : indices) out.values.push_back(m.values[i]);
  return out;
}

LabelVector take_labels(const LabelVector& y, const std::vector<std::size_t>& indices) {
  LabelVector out;
  out.class_names = y.class_names;
  out.indices.reserve(indices.size());
  for (std::size_t i : indices) out.indices.push_back(y.indices[i]);
  return out;
}

Metrics compute_metrics(const std::vector<int>& truth, const std::vector<int>& predicted,
                        std::size_t n_classes) {
  if (truth.size() != predicted.size())
    throw ValidationError("truth and prediction lengths differ");
  if (truth.empty()) throw ValidationError("cannot compute metrics on an empty set");

  Metrics metrics;
  metrics.n = truth.size();
  metrics.confusion.assign(n_classes, std::vector<std::size_t>(n_classes, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    metrics.confusion[static_cast<std::size_t>(truth[i])]
                     [static_cast<std::size_t>(predicted[i])] += 1;
    if (truth[i] == predicted[i]) ++correct;
  }
  metrics.accuracy = static_cast<double>(correct) / static_cast<double>(metrics.n);

  metrics.per_class.resize(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::size_t tp = metrics.confusion[c][c];
    std::size_t fn = 0, fp = 0;
    for (std::size_t o = 0; o < n_classes; ++o) {
      if (o == c) continue;
      fn += metrics.confusion[c][o];
      fp += metrics.confusion[o][c];
    }
    std::size_t tn = metrics.n - tp - fn - fp;
    ClassStats& s = metrics.per_class[c];
    if (tp + fn == 0) {
      s.sensitivity = 1.0;
      s.sensitivity_degenerate = true;
    } else {
      s.sensitivity = static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    if (tn + fp == 0) {
      s.specificity = 1.0;
      s.specificity_degenerate = true;
    } else {
      s.specificity = static_cast<double>(tn) / static_cast<double>(tn + fp);
    }
  }
  return metrics;
}

std::vector<std::vector<std::size_t>> stratified_folds(const LabelVector& y, std::size_t folds,
                                                       std::uint64_t seed) {
  const std::size_t n = y.indices.size();
  if (folds < 2) throw ValidationError("folds must be at least 2");
  if (folds > n)
    throw ValidationError("folds = " + std::to_string(folds) + " exceeds sample count " +
                          std::to_string(n));

  Rng rng(seed);
  std::vector<std::vector<std::size_t>> by_class = indices_by_class(y);
  for (auto& cls : by_class) rng.shuffle(cls);

  // deal class by class with a single rotating cursor so folds stay balanced
  std::vector<std::vector<std::size_t>> fold_indices(folds);
  std::size_t cursor = 0;
  for (const auto& cls : by_class)
    for (std::size_t idx : cls) {
      fold_indices[cursor % folds].push_back(idx);
      ++cursor;
    }
  return fold_indices;
}

CvResult kfold_cv(const FeatureMatrix& m, const LabelVector& y, std::size_t folds,
                  const Trainer& trainer, std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> fold_indices = stratified_folds(y, folds, seed);

  CvResult result;
  std::vector<double> accuracies;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t other = 0; other < folds; ++other)
      if (other != f)
        train_idx.insert(train_idx.end(), fold_indices[other].begin(), fold_indices[other].end());

    Predictor predictor = trainer(take_rows(m, train_idx), take_labels(y, train_idx));
    std::vector<int> truth, predicted;
    for (std::size_t idx : fold_indices[f]) {
      truth.push_back(y.indices[idx]);
      predicted.push_back(predictor(m.values[idx]));
    }
    result.fold_metrics.push_back(compute_metrics(truth, predicted, y.class_names.size()));
    accuracies.push_back(result.fold_metrics.back().accuracy);
  }

  double mean = 0.0;
  for (double a : accuracies) mean += a;
  mean /= static_cast<double>(accuracies.size());
  double var = 0.0;
  for (double a : accuracies) var += (a - mean) * (a - mean);
  var = accuracies.size() > 1 ? var / static_cast<double>(accuracies.size() - 1) : 0.0;
  result.mean_accuracy = mean;
  result.std_accuracy = std::sqrt(var);
  return result;
}

namespace {

double train_accuracy(const std::vector<int>& truth, const std::vector<int>& predicted) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (truth[i] == predicted[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

}  // namespace

ComparisonTable compare_models(const FeatureMatrix& m, const LabelVector& y,
                               const TrainConfig& rbf_cfg, const MlpConfig& mlp_cfg,
                               const LogisticConfig& logistic_cfg, std::size_t n_train,
                               std::uint64_t seed) {
  using clock = std::chrono::steady_clock;

  ComparisonTable table;
  table.split = train_test_split(y, n_train, seed);
  FeatureMatrix train_m = take_rows(m, table.split.train_indices);
  LabelVector train_y = take_labels(y, table.split.train_indices);

  const std::size_t L = y.class_names.size();
  auto evaluate = [&](const Predictor& predictor) {
    std::vector<int> truth, predicted;
    for (std::size_t idx : table.split.test_indices) {
      truth.push_back(y.indices[idx]);
      predicted.push_back(predictor(m.values[idx]));
    }
    return compute_metrics(truth, predicted, L);
  };
  auto train_preds = [&](const Predictor& predictor) {
    std::vector<int> truth, predicted;
    for (std::size_t i = 0; i < train_m.rows(); ++i) {
      truth.push_back(train_y.indices[i]);
      predicted.push_back(predictor(train_m.values[i]));
    }
    return train_accuracy(truth, predicted);
  };

  {
    std::size_t iterations = 0;
    auto t0 = clock::now();
    RbfModel model = train(train_m, train_y, rbf_cfg, &iterations);
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    Predictor p = [model](const std::vector<double>& x) { return predict(model, x); };
    table.rows.push_back({"rbf", evaluate(p), {"rbf", secs, iterations, train_preds(p)}});
  }
  {
    Scaler scaler = fit_scaler(train_m);
    FeatureMatrix z = transform(scaler, train_m);
    auto t0 = clock::now();
    MlpModel model = mlp_train(z, train_y, mlp_cfg);
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    Predictor p = [model, scaler](const std::vector<double>& x) {
      return baseline_predict(model, x, scaler).label;
    };
    table.rows.push_back({"mlp", evaluate(p), {"mlp", secs, mlp_cfg.epochs, train_preds(p)}});
  }
  {
    Scaler scaler = fit_scaler(train_m);
    FeatureMatrix z = transform(scaler, train_m);
    auto t0 = clock::now();
    LogisticModel model = logistic_train(z, train_y, logistic_cfg);
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    Predictor p = [model, scaler](const std::vector<double>& x) {
      return baseline_predict(model, x, scaler).label;
    };
    table.rows.push_back(
        {"logistic", evaluate(p), {"logistic", secs, logistic_cfg.epochs, train_preds(p)}});
  }
  return table;
}

std::string metrics_csv(const Metrics& metrics, const std::vector<std::string>& class_names) {
  std::ostringstream out;
  out << "metric,class,value,degenerate\n";
  out << "n,," << metrics.n << ",0\n";
  out << "accuracy,," << fmt_double(metrics.accuracy) << ",0\n";
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    const ClassStats& s = metrics.per_class[c];
    out << "sensitivity," << class_names[c] << "," << fmt_double(s.sensitivity) << ","
        << (s.sensitivity_degenerate ? 1 : 0) << "\n";
    out << "specificity," << class_names[c] << "," << fmt_double(s.specificity) << ","
        << (s.specificity_degenerate ? 1 : 0) << "\n";
  }
  for (std::size_t r = 0; r < class_names.size(); ++r)
    for (std::size_t c = 0; c < class_names.size(); ++c)
      out << "confusion," << class_names[r] << "|" << class_names[c] << ","
          << metrics.confusion[r][c] << ",0\n";
  return out.str();
}

namespace {

std::string fmt_ratio(double v, bool degenerate) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return std::string(buf) + (degenerate ? "*" : "");
}

}  // namespace

std::string metrics_text(const Metrics& metrics, const std::vector<std::string>& class_names) {
  std::ostringstream out;
  out << "n = " << metrics.n << ", accuracy = " << fmt_double(metrics.accuracy) << "\n";
  out << std::left << std::setw(14) << "class" << std::setw(14) << "sensitivity"
      << std::setw(14) << "specificity" << "\n";
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    const ClassStats& s = metrics.per_class[c];
    out << std::left << std::setw(14) << class_names[c] << std::setw(14)
        << fmt_ratio(s.sensitivity, s.sensitivity_degenerate) << std::setw(14)
        << fmt_ratio(s.specificity, s.specificity_degenerate) << "\n";
  }
  out << "confusion matrix (rows = true, cols = predicted):\n";
  for (std::size_t r = 0; r < class_names.size(); ++r) {
    out << "  " << std::left << std::setw(12) << class_names[r];
    for (std::size_t c = 0; c < class_names.size(); ++c)
      out << std::right << std::setw(8) << metrics.confusion[r][c];
    out << "\n";
  }
  return out.str();
}

std::string comparison_csv(const ComparisonTable& table,
                           const std::vector<std::string>& class_names) {
  std::ostringstream out;
  out << "model,accuracy,n";
  for (const auto& name : class_names) out << ",sensitivity_" << name << ",specificity_" << name;
  out << "\n";
  for (const auto& row : table.rows) {
    out << row.model_kind << "," << fmt_double(row.test_metrics.accuracy) << ","
        << row.test_metrics.n;
    for (const auto& s : row.test_metrics.per_class)
      out << "," << fmt_double(s.sensitivity) << "," << fmt_double(s.specificity);
    out << "\n";
  }
  return out.str();
}

std::string timing_csv(const ComparisonTable& table) {
  std::ostringstream out;
  out << "model,train_wall_time_s,epochs_or_iterations,final_train_accuracy\n";
  for (const auto& row : table.rows)
    out << row.timing.model_kind << "," << fmt_double(row.timing.train_wall_time_s) << ","
        << row.timing.epochs_or_iterations << "," << fmt_double(row.timing.final_train_accuracy)
        << "\n";
  return out.str();
}

std::string comparison_text(const ComparisonTable& table,
                            const std::vector<std::string>& class_names) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "model" << std::right << std::setw(10) << "test_acc"
      << std::setw(12) << "train_acc" << std::setw(12) << "time_s" << std::setw(12) << "steps";
  for (const auto& name : class_names)
    out << std::right << std::setw(12) << ("sens_" + name) << std::setw(12) << ("spec_" + name);
  out << "\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& row : table.rows) {
    out << std::left << std::setw(10) << row.model_kind << std::right << std::setw(10)
        << row.test_metrics.accuracy << std::setw(12) << row.timing.final_train_accuracy
        << std::setw(12) << row.timing.train_wall_time_s << std::setw(12)
        << row.timing.epochs_or_iterations;
    for (const auto& s : row.test_metrics.per_class)
      out << std::setw(12) << s.sensitivity << std::setw(12) << s.specificity;
    out << "\n";
  }
  return out.str();
}

}  // namespace rbfn
