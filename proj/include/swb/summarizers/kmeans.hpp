#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace swb::summarizers {

using Point = std::vector<double>;

inline double squared_distance(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double x = a[i] - b[i];
    d += x * x;
  }
  return d;
}

struct KMeansResult {
  std::vector<Point> centroids;
  std::vector<std::size_t> assignment;
  std::size_t iterations = 0;
};

// Seeded k-means with k-means++ initialization and Lloyd updates. Draws come
// straight from mt19937_64 (whose output sequence the standard fixes), so a
// seed reproduces the same clustering on every platform.
class KMeans {
 public:
  KMeans(std::size_t k, std::uint64_t seed, std::size_t max_iter = 100)
      : k_(k), rng_(seed), max_iter_(max_iter) {}

  KMeansResult run(const std::vector<Point>& points) {
    KMeansResult result;
    const std::size_t n = points.size();
    if (n == 0 || k_ == 0) return result;
    const std::size_t k = std::min(k_, n);
    result.centroids = seed_centroids(points, k);
    result.assignment.assign(n, std::numeric_limits<std::size_t>::max());
    for (std::size_t iter = 1; iter <= max_iter_; ++iter) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = nearest(result.centroids, points[i]);
        if (best != result.assignment[i]) {
          result.assignment[i] = best;
          changed = true;
        }
      }
      result.iterations = iter;
      if (!changed) break;
      update(points, result);
    }
    return result;
  }

  static std::size_t nearest(const std::vector<Point>& centroids, const Point& p) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      double d = squared_distance(centroids[c], p);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    return best;
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::size_t uniform_index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return std::min(i, n - 1);
  }

  std::vector<Point> seed_centroids(const std::vector<Point>& points, std::size_t k) {
    const std::size_t n = points.size();
    std::vector<Point> centroids;
    std::vector<bool> taken(n, false);
    std::size_t first = uniform_index(n);
    centroids.push_back(points[first]);
    taken[first] = true;
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centroids[0]);
    while (centroids.size() < k) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += taken[i] ? 0.0 : d2[i];
      std::size_t pick = n;
      if (total > 0.0) {
        double r = uniform() * total;
        double cum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (taken[i] || d2[i] == 0.0) continue;
          cum += d2[i];
          pick = i;
          if (cum > r) break;
        }
      } else {
        // every remaining point coincides with a centroid
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n; ++i) {
          if (!taken[i]) free.push_back(i);
        }
        pick = free[uniform_index(free.size())];
      }
      taken[pick] = true;
      centroids.push_back(points[pick]);
      for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points[i], points[pick]));
    }
    return centroids;
  }

  static void update(const std::vector<Point>& points, KMeansResult& r) {
    const std::size_t dim = points.front().size();
    std::vector<Point> sums(r.centroids.size(), Point(dim, 0.0));
    std::vector<std::size_t> counts(r.centroids.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::size_t c = r.assignment[i];
      for (std::size_t d = 0; d < dim; ++d) sums[c][d] += points[i][d];
      ++counts[c];
    }
    for (std::size_t c = 0; c < r.centroids.size(); ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t d = 0; d < dim; ++d) r.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
    }
  }

  std::size_t k_;
  std::mt19937_64 rng_;
  std::size_t max_iter_;
};

}  // namespace swb::summarizers
