#include "rbfn/rbfnet.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rbfn/eval.hpp"
#include "rbfn/kmeans.hpp"

namespace rbfn {

SpreadMode spread_mode_from_string(const std::string& s) {
  if (s == "scalar") return SpreadMode::scalar;
  if (s == "per_dimension") return SpreadMode::per_dimension;
  throw ValidationError("unknown spread mode '" + s + "' (expected scalar or per_dimension)");
}

std::string to_string(SpreadMode m) {
  return m == SpreadMode::scalar ? "scalar" : "per_dimension";
}

CenterStrategy center_strategy_from_string(const std::string& s) {
  if (s == "kmeans") return CenterStrategy::kmeans;
  if (s == "random_subset") return CenterStrategy::random_subset;
  throw ValidationError("unknown center strategy '" + s +
                        "' (expected kmeans or random_subset)");
}

std::string to_string(CenterStrategy c) {
  return c == CenterStrategy::kmeans ? "kmeans" : "random_subset";
}

double gaussian_kernel(double r, double sigma) {
  if (sigma <= 0) throw ValidationError("kernel spread must be positive");
  return std::exp(-(r * r) / (2.0 * sigma * sigma));
}

std::vector<double> hidden_activations(const RbfModel& m, const std::vector<double>& x) {
  if (x.size() != m.input_dim())
    throw ValidationError("input has " + std::to_string(x.size()) + " features, model expects " +
                          std::to_string(m.input_dim()));
  const std::size_t J = m.hidden_units();
  std::vector<double> z(J);
  for (std::size_t j = 0; j < J; ++j) {
    if (m.spread_mode == SpreadMode::scalar) {
      double r = std::sqrt(squared_distance(x, m.centers[j]));
      z[j] = gaussian_kernel(r, m.spreads[j][0]);
    } else {
      double e = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        double diff = x[i] - m.centers[j][i];
        double s = m.spreads[j][i];
        e += (diff * diff) / (2.0 * s * s);
      }
      z[j] = std::exp(-e);
    }
  }
  return z;
}

std::vector<double> forward(const RbfModel& m, const std::vector<double>& x) {
  std::vector<double> z = hidden_activations(m, x);
  const std::size_t L = m.n_classes();
  std::vector<double> y(L);
  for (std::size_t l = 0; l < L; ++l) {
    double sum = m.weights[0][l];  // bias input is fixed at 1.0
    for (std::size_t j = 0; j < z.size(); ++j) sum += m.weights[j + 1][l] * z[j];
    y[l] = sum;
  }
  return y;
}

std::vector<double> predict_proba(const RbfModel& m, const std::vector<double>& x_raw) {
  std::vector<double> scores = forward(m, transform_row(m.scaler, x_raw));
  double total = 0.0;
  for (double& s : scores) {
    s = std::max(s, 0.0);
    total += s;
  }
  if (total <= 0.0) {
    std::fill(scores.begin(), scores.end(), 1.0 / static_cast<double>(scores.size()));
    return scores;
  }
  for (double& s : scores) s /= total;
  return scores;
}

int predict(const RbfModel& m, const std::vector<double>& x_raw) {
  std::vector<double> p = predict_proba(m, x_raw);
  std::size_t best = 0;
  for (std::size_t l = 1; l < p.size(); ++l)
    if (p[l] > p[best]) best = l;
  return static_cast<int>(best);
}

Mat compute_spreads(const Mat& centers, const std::vector<std::size_t>& assignments,
                    const Mat& points, SpreadMode mode) {
  const std::size_t J = centers.size();
  const std::size_t d = centers.empty() ? 0 : centers[0].size();
  constexpr double kEps = 1e-6;

  double d_max = 0.0;
  for (std::size_t a = 0; a < J; ++a)
    for (std::size_t b = a + 1; b < J; ++b)
      d_max = std::max(d_max, std::sqrt(squared_distance(centers[a], centers[b])));
  double fallback = d_max > 0 ? d_max / std::sqrt(2.0 * static_cast<double>(J)) : 1.0;

  std::vector<std::size_t> counts(J, 0);
  for (std::size_t a : assignments) counts[a] += 1;

  Mat spreads(J);
  for (std::size_t j = 0; j < J; ++j) {
    if (mode == SpreadMode::scalar) {
      double sigma = fallback;
      if (counts[j] > 1) {
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i)
          if (assignments[i] == j) sum_sq += squared_distance(points[i], centers[j]);
        sigma = std::sqrt(sum_sq / static_cast<double>(counts[j]));
        if (sigma <= kEps) sigma = fallback;
      }
      spreads[j] = {sigma};
    } else {
      std::vector<double> row(d, fallback);
      if (counts[j] > 1) {
        for (std::size_t dim = 0; dim < d; ++dim) {
          double mean = 0.0;
          for (std::size_t i = 0; i < points.size(); ++i)
            if (assignments[i] == j) mean += points[i][dim];
          mean /= static_cast<double>(counts[j]);
          double var = 0.0;
          for (std::size_t i = 0; i < points.size(); ++i)
            if (assignments[i] == j) {
              double diff = points[i][dim] - mean;
              var += diff * diff;
            }
          double sigma = std::sqrt(var / static_cast<double>(counts[j]));
          row[dim] = sigma > kEps ? sigma : fallback;
        }
      }
      spreads[j] = std::move(row);
    }
  }
  return spreads;
}

namespace {

// Gaussian elimination with partial pivoting on A X = B; A is P x P,
// B is P x L. Destroys both arguments.
Mat solve_linear(Mat a, Mat b, double lambda) {
  const std::size_t p = a.size();
  const std::size_t l = b.empty() ? 0 : b[0].size();

  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  const double tiny = scale > 0 ? scale * 1e-13 : 1e-300;

  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < p; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (std::fabs(a[pivot][col]) < tiny) {
      if (lambda == 0.0)
        throw ValidationError(
            "normal equations are singular with lambda = 0; use a positive ridge coefficient");
      throw ValidationError("normal equations are numerically singular");
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < p; ++r) {
      double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < p; ++c) a[r][c] -= f * a[col][c];
      for (std::size_t c = 0; c < l; ++c) b[r][c] -= f * b[col][c];
    }
  }

  Mat x(p, std::vector<double>(l, 0.0));
  for (std::size_t ri = p; ri-- > 0;) {
    for (std::size_t c = 0; c < l; ++c) {
      double sum = b[ri][c];
      for (std::size_t cc = ri + 1; cc < p; ++cc) sum -= a[ri][cc] * x[cc][c];
      x[ri][c] = sum / a[ri][ri];
    }
  }
  return x;
}

}  // namespace

Mat fit_output_weights(const Mat& phi, const Mat& targets, double lambda) {
  if (phi.empty() || targets.empty()) throw ValidationError("empty design or target matrix");
  if (phi.size() != targets.size())
    throw ValidationError("design and target row counts differ");
  if (lambda < 0) throw ValidationError("lambda must be non-negative");

  const std::size_t n = phi.size();
  const std::size_t p = phi[0].size();
  const std::size_t l = targets[0].size();

  Mat a(p, std::vector<double>(p, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < p; ++r) {
      double v = phi[i][r];
      if (v == 0.0) continue;
      for (std::size_t c = r; c < p; ++c) a[r][c] += v * phi[i][c];
    }
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < r; ++c) a[r][c] = a[c][r];
    a[r][r] += lambda;
  }

  Mat b(p, std::vector<double>(l, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < p; ++r) {
      double v = phi[i][r];
      if (v == 0.0) continue;
      for (std::size_t c = 0; c < l; ++c) b[r][c] += v * targets[i][c];
    }

  return solve_linear(std::move(a), std::move(b), lambda);
}

RbfModel train(const FeatureMatrix& m, const LabelVector& y, const TrainConfig& cfg,
               std::size_t* iterations_out) {
  const std::size_t n = m.rows();
  const std::size_t L = y.class_names.size();
  if (cfg.hidden == 0) throw ValidationError("hidden unit count must be at least 1");
  if (cfg.hidden > n)
    throw ValidationError("hidden unit count " + std::to_string(cfg.hidden) +
                          " exceeds training size " + std::to_string(n));
  if (L < 2) throw ValidationError("training requires at least 2 classes");
  if (y.indices.size() != n) throw ValidationError("feature and label counts differ");

  RbfModel model;
  model.scaler = fit_scaler(m);
  model.feature_names = m.feature_names;
  model.class_names = y.class_names;
  model.spread_mode = cfg.spread_mode;

  FeatureMatrix z = transform(model.scaler, m);

  std::vector<std::size_t> assignments;
  if (cfg.centers == CenterStrategy::kmeans) {
    Clustering c = kmeans(z.values, cfg.hidden, cfg.seed);
    model.centers = std::move(c.centers);
    assignments = std::move(c.assignments);
    if (iterations_out) *iterations_out = c.iterations;
  } else {
    model.centers = random_subset_centers(z.values, cfg.hidden, cfg.seed);
    assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) assignments[i] = nearest_center(model.centers, z.values[i]);
    if (iterations_out) *iterations_out = 0;
  }

  model.spreads = compute_spreads(model.centers, assignments, z.values, cfg.spread_mode);

  Mat phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row;
    row.reserve(cfg.hidden + 1);
    row.push_back(1.0);
    for (double v : hidden_activations(model, z.values[i])) row.push_back(v);
    phi[i] = std::move(row);
  }

  Mat targets(n, std::vector<double>(L, 0.0));
  for (std::size_t i = 0; i < n; ++i) targets[i][static_cast<std::size_t>(y.indices[i])] = 1.0;

  model.weights = fit_output_weights(phi, targets, cfg.lambda);
  return model;
}

HiddenSizeChoice select_hidden_size(const FeatureMatrix& m, const LabelVector& y,
                                    const std::vector<std::size_t>& grid, std::size_t folds,
                                    std::uint64_t seed, const TrainConfig& base) {
  if (grid.empty()) throw ValidationError("hidden-size grid is empty");
  if (folds < 2) throw ValidationError("cross-validation requires at least 2 folds");

  std::vector<std::size_t> sizes(grid);
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::vector<std::vector<std::size_t>> fold_indices = stratified_folds(y, folds, seed);
  std::size_t min_train = m.rows();
  for (const auto& f : fold_indices) min_train = std::min(min_train, m.rows() - f.size());
  if (sizes.back() > min_train)
    throw ValidationError("hidden size " + std::to_string(sizes.back()) +
                          " exceeds the smallest training-fold size " +
                          std::to_string(min_train));

  HiddenSizeChoice choice;
  for (std::size_t gi = 0; gi < sizes.size(); ++gi) {
    TrainConfig cfg = base;
    cfg.hidden = sizes[gi];
    std::vector<double> accuracies;
    for (std::size_t f = 0; f < folds; ++f) {
      cfg.seed = mix_seed(seed, gi * folds + f);
      std::vector<std::size_t> train_idx;
      for (std::size_t other = 0; other < folds; ++other)
        if (other != f)
          train_idx.insert(train_idx.end(), fold_indices[other].begin(),
                           fold_indices[other].end());
      FeatureMatrix train_m = take_rows(m, train_idx);
      LabelVector train_y = take_labels(y, train_idx);
      RbfModel model = train(train_m, train_y, cfg);

      std::size_t correct = 0;
      for (std::size_t idx : fold_indices[f])
        if (predict(model, m.values[idx]) == y.indices[idx]) ++correct;
      accuracies.push_back(fold_indices[f].empty()
                               ? 1.0
                               : static_cast<double>(correct) /
                                     static_cast<double>(fold_indices[f].size()));
    }

    double mean = 0.0;
    for (double a : accuracies) mean += a;
    mean /= static_cast<double>(accuracies.size());
    double var = 0.0;
    for (double a : accuracies) var += (a - mean) * (a - mean);
    var /= static_cast<double>(accuracies.size() - 1);
    double se = std::sqrt(var) / std::sqrt(static_cast<double>(accuracies.size()));
    choice.table.push_back({sizes[gi], mean, se});
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < choice.table.size(); ++i)
    if (choice.table[i].mean_accuracy > choice.table[best].mean_accuracy) best = i;
  const double threshold =
      choice.table[best].mean_accuracy - choice.table[best].std_error - 1e-12;
  for (const auto& entry : choice.table)
    if (entry.mean_accuracy >= threshold) {
      choice.chosen = entry.hidden;
      break;
    }
  return choice;
}

}  // namespace rbfn
