#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "swb/embeddings.hpp"
#include "swb/error.hpp"
#include "swb/summarizers/kmeans.hpp"
#include "swb/summarizers/types.hpp"
#include "swb/text/document.hpp"

namespace swb::summarizers {

namespace detail {

struct ClusterPick {
  std::vector<std::size_t> selected;  // document indices, ascending
  std::vector<double> distance;       // per document sentence; +inf when not embeddable
};

// Clusters the embeddable sentences into k groups and, centroid by centroid,
// takes the nearest sentence not already taken.
inline ClusterPick pick_by_clusters(const std::vector<Point>& points, const std::vector<std::size_t>& doc_index,
                                    std::size_t doc_size, std::size_t k, std::uint64_t seed) {
  KMeansResult km = KMeans(k, seed).run(points);
  ClusterPick pick;
  pick.distance.assign(doc_size, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < points.size(); ++i) {
    pick.distance[doc_index[i]] = std::sqrt(squared_distance(points[i], km.centroids[km.assignment[i]]));
  }
  std::vector<bool> taken(points.size(), false);
  for (const Point& c : km.centroids) {
    std::size_t best = points.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (taken[i]) continue;
      double d = squared_distance(points[i], c);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best == points.size()) break;
    taken[best] = true;
    pick.selected.push_back(doc_index[best]);
  }
  std::sort(pick.selected.begin(), pick.selected.end());
  return pick;
}

}  // namespace detail

// Extractive summary from sentence-embedding clusters: k is the budgeted
// sentence count; words budgets grow k while the selection still fits.
inline SummaryResult cluster_summarize(const text::Document& doc, const VectorStore& store, const Budget& budget,
                                       std::uint64_t seed) {
  budget.validate();
  if (doc.sentences.empty()) throw Error(Errc::EmptyDocument, "document has no sentences");
  std::vector<Point> points;
  std::vector<std::size_t> doc_index;
  for (const text::Sentence& s : doc.sentences) {
    PooledEmbedding e = pool_mean(s.tokens, store);
    if (e.support == 0) continue;
    points.push_back(std::move(e.vector));
    doc_index.push_back(s.index);
  }
  if (points.empty()) throw Error(Errc::NoEmbeddableSentences, "no sentence has in-vocabulary content words");

  detail::ClusterPick pick;
  if (auto cap = budget.sentence_cap(doc.sentences.size())) {
    pick = detail::pick_by_clusters(points, doc_index, doc.sentences.size(), std::min(*cap, points.size()), seed);
  } else {
    auto limit = static_cast<std::size_t>(budget.value);
    for (std::size_t k = 1; k <= points.size(); ++k) {
      auto candidate = detail::pick_by_clusters(points, doc_index, doc.sentences.size(), k, seed);
      std::size_t words = 0;
      for (std::size_t idx : candidate.selected) words += doc.sentences[idx].word_count();
      if (k > 1 && words > limit) break;
      pick = std::move(candidate);
      if (words >= limit) break;
    }
  }
  SummaryResult result = make_result("clustersum", doc, pick.selected);
  result.rank_scores.reserve(pick.distance.size());
  for (double d : pick.distance) result.rank_scores.push_back(std::isinf(d) ? 0.0 : 1.0 / (1.0 + d));
  return result;
}

}  // namespace swb::summarizers
