#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbfn/dataset.hpp"

namespace rbfn {

// Binary logistic regression; one-vs-rest stack of L rows when L > 2.
// Each row is [bias, w_1 .. w_d].
struct LogisticModel {
  Mat weights;  // 1 x (d+1) for binary, L x (d+1) for one-vs-rest
  std::vector<std::string> class_names;

  std::size_t n_classes() const { return class_names.size(); }
};

struct LogisticConfig {
  double lr = 0.1;
  std::size_t epochs = 1000;
  std::uint64_t seed = 0;  // unused (zero init); kept for config uniformity
};

// One hidden layer of sigmoid units, per-class sigmoid outputs.
// Weight rows carry the bias in column 0.
struct MlpModel {
  Mat hidden_weights;  // H x (d+1)
  Mat output_weights;  // L x (H+1)
  std::vector<std::string> class_names;

  std::size_t hidden_units() const { return hidden_weights.size(); }
  std::size_t n_classes() const { return class_names.size(); }
};

struct MlpConfig {
  std::size_t hidden = 8;
  double lr = 0.1;
  std::size_t epochs = 2000;
  std::uint64_t seed = 0;
};

// Mean cross-entropy of a single binary task; w = [bias, w_1..w_d],
// targets in {0,1}.
double logistic_loss(const std::vector<double>& w, const Mat& x, const std::vector<int>& t);
std::vector<double> logistic_gradient(const std::vector<double>& w, const Mat& x,
                                      const std::vector<int>& t);

// Full-batch gradient descent from zero weights on standardized features.
// loss_out, when given, records the total training loss per epoch.
LogisticModel logistic_train(const FeatureMatrix& m, const LabelVector& y,
                             const LogisticConfig& cfg, std::vector<double>* loss_out = nullptr);

// Mean (over samples) summed per-class binary cross-entropy.
double mlp_loss(const MlpModel& model, const Mat& x, const Mat& targets);

struct MlpGradients {
  Mat hidden;  // H x (d+1)
  Mat output;  // L x (H+1)
};
MlpGradients mlp_gradients(const MlpModel& model, const Mat& x, const Mat& targets);

// Backprop with full-batch gradient descent and seeded uniform(-0.5, 0.5)
// initialization on standardized features.
MlpModel mlp_train(const FeatureMatrix& m, const LabelVector& y, const MlpConfig& cfg,
                   std::vector<double>* loss_out = nullptr);

struct BaselinePrediction {
  int label = 0;
  std::vector<double> probabilities;  // sums to 1
};

// Standardize, forward, normalize the per-class outputs; ties to the lowest
// class index.
BaselinePrediction baseline_predict(const LogisticModel& model, const std::vector<double>& x_raw,
                                    const Scaler& scaler);
BaselinePrediction baseline_predict(const MlpModel& model, const std::vector<double>& x_raw,
                                    const Scaler& scaler);

}  // namespace rbfn
