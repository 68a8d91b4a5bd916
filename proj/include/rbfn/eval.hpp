#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rbfn/baselines.hpp"
#include "rbfn/dataset.hpp"
#include "rbfn/rbfnet.hpp"

namespace rbfn {

struct ClassStats {
  double sensitivity = 0.0;  // TP / (TP + FN)
  double specificity = 0.0;  // TN / (TN + FP)
  // 0/0 ratios are reported as 1.0 and flagged here
  bool sensitivity_degenerate = false;
  bool specificity_degenerate = false;
};

struct Metrics {
  std::vector<std::vector<std::size_t>> confusion;  // L x L, rows = true, cols = predicted
  double accuracy = 0.0;
  std::vector<ClassStats> per_class;
  std::size_t n = 0;
};

struct TimingReport {
  std::string model_kind;
  double train_wall_time_s = 0.0;
  std::size_t epochs_or_iterations = 0;
  double final_train_accuracy = 0.0;
};

struct Split {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::vector<std::string> warnings;
};

// Seeded shuffle then split, stratified so each class lands on both sides
// when its counts permit. Falls back to a plain shuffle (with a warning)
// when any class has fewer than 2 members.
Split train_test_split(const LabelVector& y, std::size_t n_train, std::uint64_t seed);

FeatureMatrix take_rows(const FeatureMatrix& m, const std::vector<std::size_t>& indices);
LabelVector take_labels(const LabelVector& y, const std::vector<std::size_t>& indices);

Metrics compute_metrics(const std::vector<int>& truth, const std::vector<int>& predicted,
                        std::size_t n_classes);

// Deterministic stratified fold index sets; the folds partition 0..N-1.
std::vector<std::vector<std::size_t>> stratified_folds(const LabelVector& y, std::size_t folds,
                                                       std::uint64_t seed);

using Predictor = std::function<int(const std::vector<double>&)>;
using Trainer = std::function<Predictor(const FeatureMatrix&, const LabelVector&)>;

struct CvResult {
  std::vector<Metrics> fold_metrics;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // sample standard deviation over folds
};

// Each fold is predicted by a model trained on the remaining folds.
CvResult kfold_cv(const FeatureMatrix& m, const LabelVector& y, std::size_t folds,
                  const Trainer& trainer, std::uint64_t seed);

struct ModelComparison {
  std::string model_kind;
  Metrics test_metrics;
  TimingReport timing;
};

struct ComparisonTable {
  std::vector<ModelComparison> rows;  // rbf, mlp, logistic
  Split split;
};

// Trains all three models on the same split and evaluates them on the same
// test set. Timing covers the train call only.
ComparisonTable compare_models(const FeatureMatrix& m, const LabelVector& y,
                               const TrainConfig& rbf_cfg, const MlpConfig& mlp_cfg,
                               const LogisticConfig& logistic_cfg, std::size_t n_train,
                               std::uint64_t seed);

// Long-format metrics CSV: metric,class,value rows plus the confusion matrix.
std::string metrics_csv(const Metrics& metrics, const std::vector<std::string>& class_names);
std::string metrics_text(const Metrics& metrics, const std::vector<std::string>& class_names);

// Comparison table as CSV (timing kept separate so reruns are byte-identical)
// and as an aligned text table including timing.
std::string comparison_csv(const ComparisonTable& table,
                           const std::vector<std::string>& class_names);
std::string timing_csv(const ComparisonTable& table);
std::string comparison_text(const ComparisonTable& table,
                            const std::vector<std::string>& class_names);

}  // namespace rbfn
