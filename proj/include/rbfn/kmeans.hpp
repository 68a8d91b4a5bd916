#pragma once

#include <cstdint>
#include <vector>

#include "rbfn/common.hpp"

namespace rbfn {

struct Clustering {
  Mat centers;                            // k x d
  std::vector<std::size_t> assignments;   // N, each < k
  double inertia = 0.0;                   // total within-cluster sum of squared distances
  std::size_t iterations = 0;
  std::vector<double> inertia_history;    // one entry per Lloyd iteration, non-increasing
  bool converged = false;                 // assignments reached a fixed point
};

struct KmeansOptions {
  std::size_t max_iter = 100;
  double tol = 1e-9;  // stop when inertia improvement falls below this
};

// Lloyd iterations from a seeded random-distinct-points initialization.
// Distance ties assign to the lowest cluster index. An empty cluster is
// reseeded at the point farthest from its assigned center (taken from a
// cluster with at least two members). Deterministic for a fixed seed.
Clustering kmeans(const Mat& points, std::size_t k, std::uint64_t seed,
                  KmeansOptions opt = {});

// k distinct rows sampled without replacement under seed.
Mat random_subset_centers(const Mat& points, std::size_t k, std::uint64_t seed);

// Index of the nearest center; ties broken by lowest index.
std::size_t nearest_center(const Mat& centers, const std::vector<double>& x);

}  // namespace rbfn
