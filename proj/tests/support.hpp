#pragma once

// Shared helpers for the unit and acceptance suites: fixture lookup, scratch
// directories, dataset generators and the independent oracles the
// implementation is checked against.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <unistd.h>

#include "rbfn/common.hpp"
#include "rbfn/dataset.hpp"

namespace testsupport {

inline std::string fixture_path() {
  if (const char* env = std::getenv("RBFN_FIXTURE")) return env;
  return "fixtures/patients10.csv";
}

// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("rbfn_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline rbfn::Mat random_matrix(std::size_t rows, std::size_t cols, rbfn::Rng& rng, double lo = -1.0,
                               double hi = 1.0) {
  rbfn::Mat m(rows, std::vector<double>(cols));
  for (auto& row : m)
    for (double& v : row) v = rng.uniform(lo, hi);
  return m;
}

// Random labelled dataset with a minimum pairwise point separation and at
// least one sample per class.
struct RandomDataset {
  rbfn::FeatureMatrix features;
  rbfn::LabelVector labels;
};

inline RandomDataset make_separated_dataset(std::size_t n, std::size_t d, std::size_t classes,
                                            std::uint64_t seed, double min_separation = 0.3) {
  rbfn::Rng rng(seed);
  RandomDataset ds;
  for (std::size_t j = 0; j < d; ++j) ds.features.feature_names.push_back("f" + std::to_string(j));
  while (ds.features.values.size() < n) {
    std::vector<double> p(d);
    for (double& v : p) v = rng.uniform(-1.0, 1.0);
    bool ok = true;
    for (const auto& q : ds.features.values)
      if (rbfn::squared_distance(p, q) < min_separation * min_separation) {
        ok = false;
        break;
      }
    if (ok) ds.features.values.push_back(std::move(p));
  }
  for (std::size_t c = 0; c < classes; ++c) ds.labels.class_names.push_back("c" + std::to_string(c));
  for (;;) {
    ds.labels.indices.clear();
    for (std::size_t i = 0; i < n; ++i)
      ds.labels.indices.push_back(static_cast<int>(rng.below(classes)));
    std::vector<bool> seen(classes, false);
    for (int idx : ds.labels.indices) seen[static_cast<std::size_t>(idx)] = true;
    bool all = true;
    for (bool s : seen) all = all && s;
    if (all) break;
  }
  return ds;
}

// Two Gaussian-ish blobs far apart; linearly separable.
inline RandomDataset make_blobs(std::size_t n, std::uint64_t seed) {
  rbfn::Rng rng(seed);
  RandomDataset ds;
  ds.features.feature_names = {"x0", "x1"};
  ds.labels.class_names = {"a", "b"};
  for (std::size_t i = 0; i < n; ++i) {
    int cls = static_cast<int>(rng.below(2));
    double cx = cls == 0 ? -3.0 : 3.0;
    ds.features.values.push_back({cx + rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    ds.labels.indices.push_back(cls);
  }
  return ds;
}

// Two-class ring data: the label marks points inside a fixed radius, which
// no linear boundary can separate.
inline RandomDataset make_ring(std::size_t n, std::uint64_t seed) {
  rbfn::Rng rng(seed);
  RandomDataset ds;
  ds.features.feature_names = {"x0", "x1"};
  ds.labels.class_names = {"inside", "outside"};
  for (std::size_t i = 0; i < n; ++i) {
    double x = rng.uniform(-1.0, 1.0);
    double y = rng.uniform(-1.0, 1.0);
    ds.features.values.push_back({x, y});
    ds.labels.indices.push_back(x * x + y * y < 0.49 ? 0 : 1);
  }
  return ds;
}

// ---- independent oracles -------------------------------------------------

// Exhaustive k-means optimum: tries every assignment of points to clusters
// and returns the smallest within-cluster sum of squares.
inline double brute_force_kmeans_inertia(const rbfn::Mat& points, std::size_t k) {
  const std::size_t n = points.size();
  const std::size_t d = points[0].size();
  std::vector<std::size_t> assign(n, 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      counts[assign[i]] += 1;
      for (std::size_t j = 0; j < d; ++j) sums[assign[i]][j] += points[i][j];
    }
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double dist = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double mean = sums[assign[i]][j] / static_cast<double>(counts[assign[i]]);
        double diff = points[i][j] - mean;
        dist += diff * diff;
      }
      inertia += dist;
    }
    best = std::min(best, inertia);

    std::size_t pos = 0;
    while (pos < n && assign[pos] == k - 1) assign[pos++] = 0;
    if (pos == n) break;
    assign[pos] += 1;
  }
  return best;
}

// Determinant by cofactor expansion along the first row.
inline double cofactor_determinant(const rbfn::Mat& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  double det = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    rbfn::Mat minor(n - 1, std::vector<double>(n - 1));
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t mc = 0;
      for (std::size_t cc = 0; cc < n; ++cc) {
        if (cc == c) continue;
        minor[r - 1][mc++] = a[r][cc];
      }
    }
    double sign = c % 2 == 0 ? 1.0 : -1.0;
    det += sign * a[0][c] * cofactor_determinant(minor);
  }
  return det;
}

// Adjugate inverse; feasible for the small systems the tests use.
inline rbfn::Mat cofactor_inverse(const rbfn::Mat& a) {
  const std::size_t n = a.size();
  const double det = cofactor_determinant(a);
  rbfn::Mat inv(n, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      rbfn::Mat minor(n - 1, std::vector<double>(n - 1));
      std::size_t mr = 0;
      for (std::size_t rr = 0; rr < n; ++rr) {
        if (rr == r) continue;
        std::size_t mc = 0;
        for (std::size_t cc = 0; cc < n; ++cc) {
          if (cc == c) continue;
          minor[mr][mc++] = a[rr][cc];
        }
        ++mr;
      }
      double sign = (r + c) % 2 == 0 ? 1.0 : -1.0;
      double cof = n == 1 ? 1.0 : sign * cofactor_determinant(minor);
      inv[c][r] = cof / det;  // transposed: adjugate
    }
  return inv;
}

// Ridge pseudo-inverse oracle: (Phi^T Phi + lambda I)^-1 Phi^T T.
inline rbfn::Mat pseudo_inverse_weights(const rbfn::Mat& phi, const rbfn::Mat& targets,
                                        double lambda) {
  const std::size_t n = phi.size();
  const std::size_t p = phi[0].size();
  const std::size_t l = targets[0].size();
  rbfn::Mat a(p, std::vector<double>(p, 0.0));
  for (std::size_t r = 0; r < p; ++r)
    for (std::size_t c = 0; c < p; ++c) {
      for (std::size_t i = 0; i < n; ++i) a[r][c] += phi[i][r] * phi[i][c];
      if (r == c) a[r][c] += lambda;
    }
  rbfn::Mat inv = cofactor_inverse(a);
  rbfn::Mat pt(p, std::vector<double>(l, 0.0));
  for (std::size_t r = 0; r < p; ++r)
    for (std::size_t c = 0; c < l; ++c)
      for (std::size_t i = 0; i < n; ++i) pt[r][c] += phi[i][r] * targets[i][c];
  rbfn::Mat w(p, std::vector<double>(l, 0.0));
  for (std::size_t r = 0; r < p; ++r)
    for (std::size_t c = 0; c < l; ++c)
      for (std::size_t m = 0; m < p; ++m) w[r][c] += inv[r][m] * pt[m][c];
  return w;
}

inline double max_abs_diff(const rbfn::Mat& a, const rbfn::Mat& b) {
  double worst = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < a[r].size(); ++c)
      worst = std::max(worst, std::fabs(a[r][c] - b[r][c]));
  return worst;
}

}  // namespace testsupport
