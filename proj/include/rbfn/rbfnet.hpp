#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbfn/dataset.hpp"

namespace rbfn {

enum class SpreadMode { scalar, per_dimension };
enum class CenterStrategy { kmeans, random_subset };

SpreadMode spread_mode_from_string(const std::string& s);
std::string to_string(SpreadMode m);
CenterStrategy center_strategy_from_string(const std::string& s);
std::string to_string(CenterStrategy c);

// Gaussian RBF classifier. Hidden unit j responds to the distance between a
// standardized input and its center; the linear summation layer (with a bias
// weight in row 0) turns the activations into one raw score per class.
struct RbfModel {
  Mat centers;  // J x d, standardized units
  Mat spreads;  // J x 1 (scalar mode) or J x d (per-dimension), all > 0
  Mat weights;  // (J+1) x L, row 0 = bias weights
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;
  Scaler scaler;
  SpreadMode spread_mode = SpreadMode::scalar;

  std::size_t hidden_units() const { return centers.size(); }
  std::size_t input_dim() const { return centers.empty() ? 0 : centers[0].size(); }
  std::size_t n_classes() const { return class_names.size(); }
};

// exp(-r^2 / (2 sigma^2)); requires sigma > 0
double gaussian_kernel(double r, double sigma);

// Hidden-layer response to an already-standardized input.
std::vector<double> hidden_activations(const RbfModel& m, const std::vector<double>& x);

// Raw class scores: bias + weighted sum of hidden activations.
std::vector<double> forward(const RbfModel& m, const std::vector<double>& x);

// Standardize, forward, clip scores at zero and normalize to sum 1.
// All scores clipped away -> uniform distribution.
std::vector<double> predict_proba(const RbfModel& m, const std::vector<double>& x_raw);

// argmax of predict_proba; ties go to the lowest class index
int predict(const RbfModel& m, const std::vector<double>& x_raw);

// Spread of each hidden unit from its cluster. Scalar: RMS distance of the
// assigned points to the center. Per-dimension: per-coordinate standard
// deviation. Degenerate clusters (size <= 1 or spread <= 1e-6) fall back to
// d_max / sqrt(2J) over the centers, and to 1 when all centers coincide.
Mat compute_spreads(const Mat& centers, const std::vector<std::size_t>& assignments,
                    const Mat& points, SpreadMode mode);

// Ridge least squares via the normal equations (Phi^T Phi + lambda I) W = Phi^T T.
// phi is N x (J+1) with the bias column supplied by the caller; targets are
// N x L one-hot. A singular system with lambda = 0 is an error.
Mat fit_output_weights(const Mat& phi, const Mat& targets, double lambda);

struct TrainConfig {
  std::size_t hidden = 10;  // J
  CenterStrategy centers = CenterStrategy::kmeans;
  SpreadMode spread_mode = SpreadMode::scalar;
  double lambda = 1e-8;
  std::uint64_t seed = 0;
};

// Full pipeline: fit scaler, standardize, place centers, estimate spreads,
// build the design matrix and solve for output weights.
// iterations_out, when given, receives the k-means iteration count (0 for
// the random-subset strategy).
RbfModel train(const FeatureMatrix& m, const LabelVector& y, const TrainConfig& cfg,
               std::size_t* iterations_out = nullptr);

struct HiddenSizeChoice {
  std::size_t chosen = 0;
  struct Entry {
    std::size_t hidden;
    double mean_accuracy;
    double std_error;
  };
  std::vector<Entry> table;  // ascending by hidden size
};

// Stratified k-fold CV over the candidate hidden sizes; picks the smallest J
// whose mean accuracy is within one standard error of the best mean.
HiddenSizeChoice select_hidden_size(const FeatureMatrix& m, const LabelVector& y,
                                    const std::vector<std::size_t>& grid, std::size_t folds,
                                    std::uint64_t seed, const TrainConfig& base = {});

}  // namespace rbfn
