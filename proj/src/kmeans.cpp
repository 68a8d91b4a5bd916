#include "rbfn/kmeans.hpp"

#include <limits>
#include <string>

namespace rbfn {

std::size_t nearest_center(const Mat& centers, const std::vector<double>& x) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    double d = squared_distance(centers[c], x);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

Mat random_subset_centers(const Mat& points, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw ValidationError("k must be at least 1");
  if (k > points.size())
    throw ValidationError("k = " + std::to_string(k) + " exceeds point count " +
                          std::to_string(points.size()));
  Rng rng(seed);
  Mat centers;
  centers.reserve(k);
  for (std::size_t idx : rng.sample_indices(points.size(), k)) centers.push_back(points[idx]);
  return centers;
}

namespace {

// Reseed each empty cluster at the point farthest from its assigned center.
// Only points from clusters with >= 2 members may move, so every pass
// strictly grows the set of non-empty clusters.
void repair_empty_clusters(const Mat& points, Mat& centers,
                           std::vector<std::size_t>& assignments,
                           std::vector<std::size_t>& counts) {
  const std::size_t k = centers.size();
  for (;;) {
    std::size_t empty = k;
    for (std::size_t c = 0; c < k; ++c)
      if (counts[c] == 0) {
        empty = c;
        break;
      }
    if (empty == k) return;

    std::size_t worst = points.size();
    double worst_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (counts[assignments[i]] < 2) continue;
      double d = squared_distance(points[i], centers[assignments[i]]);
      if (d > worst_d) {
        worst_d = d;
        worst = i;
      }
    }
    // k <= N guarantees some cluster has >= 2 members while any is empty
    counts[assignments[worst]] -= 1;
    assignments[worst] = empty;
    counts[empty] = 1;
    centers[empty] = points[worst];
  }
}

}  // namespace

Clustering kmeans(const Mat& points, std::size_t k, std::uint64_t seed, KmeansOptions opt) {
  const std::size_t n = points.size();
  if (k == 0) throw ValidationError("k must be at least 1");
  if (k > n)
    throw ValidationError("k = " + std::to_string(k) + " exceeds point count " +
                          std::to_string(n));
  if (opt.max_iter < 1) throw ValidationError("max_iter must be at least 1");
  if (opt.tol < 0) throw ValidationError("tol must be non-negative");

  const std::size_t d = points[0].size();
  Clustering result;
  result.centers = random_subset_centers(points, k, seed);
  result.assignments.assign(n, 0);

  std::vector<std::size_t> prev_assignments;
  double prev_inertia = std::numeric_limits<double>::infinity();

  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    result.iterations = it;

    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      result.assignments[i] = nearest_center(result.centers, points[i]);
      counts[result.assignments[i]] += 1;
    }
    repair_empty_clusters(points, result.centers, result.assignments, counts);

    if (result.assignments == prev_assignments) {
      result.converged = true;
      result.inertia_history.push_back(result.inertia);
      break;
    }

    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double> mean(d, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        if (result.assignments[i] == c)
          for (std::size_t j = 0; j < d; ++j) mean[j] += points[i][j];
      for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(counts[c]);
      result.centers[c] = std::move(mean);
    }

    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      inertia += squared_distance(points[i], result.centers[result.assignments[i]]);
    result.inertia = inertia;
    result.inertia_history.push_back(inertia);

    if (prev_inertia - inertia < opt.tol) break;
    prev_assignments = result.assignments;
    prev_inertia = inertia;
  }
  return result;
}

}  // namespace rbfn
