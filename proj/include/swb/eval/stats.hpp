#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swb/error.hpp"
#include "swb/eval/run.hpp"

namespace swb::eval {

// Pearson r; nullopt when either side is constant.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::DimensionMismatch, "x and y differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw Error(Errc::InsufficientData, "need at least two points");
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// 1-based ranks, ties share the average of their positions.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

inline std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  return pearson(rx, ry);
}

struct Correlation {
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::size_t n = 0;
};

struct PlotPoint {
  std::size_t example = 0;
  double x = 0.0;
  double y = 0.0;

  bool operator==(const PlotPoint&) const = default;
};

struct Histogram {
  std::vector<double> edges;  // counts.size() + 1
  std::vector<std::size_t> counts;
};

// Equal-width bins over [min, max], last bin right-inclusive. A constant
// sample gets a single zero-width bin.
inline Histogram histogram(std::span<const double> values, std::size_t bins) {
  if (bins < 1) throw Error(Errc::InvalidConfig, "bins must be >= 1");
  Histogram h;
  if (values.empty()) return h;
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (lo == hi) {
    h.edges = {lo, hi};
    h.counts = {values.size()};
    return h;
  }
  double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.edges.push_back(i == bins ? hi : lo + width * static_cast<double>(i));
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    ++h.counts[std::min(b, bins - 1)];
  }
  return h;
}

namespace detail {

inline std::vector<PlotPoint> paired_points(const EvalRun& run, const std::string& model, const std::string& x,
                                            const std::string& y) {
  std::vector<PlotPoint> pts;
  for (const auto& e : run.examples) {
    auto vx = run.value(e.id, model, x);
    auto vy = run.value(e.id, model, y);
    if (vx && vy) pts.push_back({e.id, *vx, *vy});
  }
  return pts;
}

}  // namespace detail

inline Correlation correlate(const EvalRun& run, const std::string& model, const std::string& x, const std::string& y) {
  auto pts = detail::paired_points(run, model, x, y);
  if (pts.size() < 2) {
    throw Error(Errc::InsufficientData, "need two examples with both " + x + " and " + y + " for " + model);
  }
  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  return {pearson(xs, ys), spearman(xs, ys), pts.size()};
}

struct PlotData {
  std::string model;
  std::string x;
  std::string y;
  std::vector<PlotPoint> points;
  Histogram x_hist;
  Histogram y_hist;
  Correlation correlation;
};

inline PlotData plot_data(const EvalRun& run, const std::string& model, const std::string& x, const std::string& y,
                          std::size_t bins = 10) {
  if (bins < 1) throw Error(Errc::InvalidConfig, "bins must be >= 1");
  PlotData d{model, x, y, detail::paired_points(run, model, x, y), {}, {}, {}};
  if (d.points.empty()) throw Error(Errc::InsufficientData, "no example has both " + x + " and " + y + " for " + model);
  std::vector<double> xs, ys;
  for (const auto& p : d.points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  d.x_hist = histogram(xs, bins);
  d.y_hist = histogram(ys, bins);
  d.correlation.n = d.points.size();
  if (d.points.size() >= 2) {
    d.correlation.pearson = pearson(xs, ys);
    d.correlation.spearman = spearman(xs, ys);
  }
  return d;
}

inline json to_json(const Histogram& h) { return {{"edges", h.edges}, {"counts", h.counts}}; }

inline json to_json(const Correlation& c) {
  return {{"pearson", c.pearson ? json(*c.pearson) : json(nullptr)},
          {"spearman", c.spearman ? json(*c.spearman) : json(nullptr)},
          {"n", c.n}};
}

inline json to_json(const PlotData& d) {
  json pts = json::array();
  for (const auto& p : d.points) pts.push_back({{"example", p.example}, {"x", p.x}, {"y", p.y}});
  return {{"model", d.model},
          {"x", d.x},
          {"y", d.y},
          {"points", pts},
          {"histograms", {{"x", to_json(d.x_hist)}, {"y", to_json(d.y_hist)}}},
          {"correlation", to_json(d.correlation)}};
}

}  // namespace swb::eval
