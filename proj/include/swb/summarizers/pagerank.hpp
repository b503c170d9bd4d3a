#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swb/error.hpp"

namespace swb::summarizers {

// Dense square matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

enum class RankVariant { Plain, Position, Topic, Biased };

struct RankConfig {
  RankVariant variant = RankVariant::Plain;
  double damping = 0.85;
  std::size_t max_iter = 100;
  double tol = 1e-6;
  std::optional<std::string> focus;

  void validate() const {
    if (!(damping > 0.0 && damping < 1.0)) throw Error(Errc::InvalidConfig, "damping must lie in (0, 1)");
    if (!(tol > 0.0)) throw Error(Errc::InvalidConfig, "tol must be positive");
    if (max_iter < 1) throw Error(Errc::InvalidConfig, "max_iter must be >= 1");
  }
};

struct PageRankResult {
  std::vector<double> scores;
  std::size_t iterations = 0;
  bool converged = false;
};

// Personalized PageRank by power iteration:
//   p <- (1 - d) * teleport + d * (W_rownorm^T p + dangling_mass * teleport)
// Rows with zero total weight redistribute their mass along the teleport
// vector. Stops when the L1 change drops below tol.
inline PageRankResult pagerank(const Matrix& weights, std::span<const double> teleport,
                               const RankConfig& cfg) {
  cfg.validate();
  const std::size_t n = weights.size();
  if (n == 0) throw Error(Errc::EmptyDocument, "graph has no nodes");
  if (teleport.size() != n) {
    throw Error(Errc::BadTeleport, "teleport has " + std::to_string(teleport.size()) +
                                       " entries for " + std::to_string(n) + " nodes");
  }
  double mass = 0.0;
  for (double t : teleport) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw Error(Errc::BadTeleport, "negative or non-finite entry");
    mass += t;
  }
  if (std::abs(mass - 1.0) > 1e-9) throw Error(Errc::BadTeleport, "teleport does not sum to 1");

  std::vector<double> out_degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double w = weights(i, j);
      if (w < 0.0) throw Error(Errc::InvalidConfig, "edge weights must be nonnegative");
      out_degree[i] += w;
    }
  }

  const double d = cfg.damping;
  PageRankResult result;
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (std::size_t iter = 1; iter <= cfg.max_iter; ++iter) {
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (out_degree[i] == 0.0) dangling += p[i];
    }
    for (std::size_t j = 0; j < n; ++j) next[j] = ((1.0 - d) + d * dangling) * teleport[j];
    for (std::size_t i = 0; i < n; ++i) {
      if (out_degree[i] == 0.0) continue;
      double share = d * p[i] / out_degree[i];
      for (std::size_t j = 0; j < n; ++j) next[j] += share * weights(i, j);
    }
    double total = 0.0;
    for (double x : next) total += x;
    double delta = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      next[j] /= total;
      delta += std::abs(next[j] - p[j]);
    }
    p.swap(next);
    result.iterations = iter;
    if (delta < cfg.tol) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(p);
  return result;
}

}  // namespace swb::summarizers
