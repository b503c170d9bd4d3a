#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "swb/embeddings.hpp"
#include "swb/measures/score.hpp"

namespace swb::measures {

struct EmbeddingOptions {
  bool include_stopwords = false;
};

namespace detail {

inline std::vector<std::span<const float>> embeddable(TokenSpan tokens, const VectorStore& store,
                                                      const EmbeddingOptions& opts) {
  std::vector<std::span<const float>> out;
  for (const text::Token& t : tokens) {
    if (t.is_punct) continue;
    if (t.is_stopword && !opts.include_stopwords) continue;
    if (auto v = store.find(t.normalized)) out.push_back(*v);
  }
  return out;
}

// Mean over `from` of the best cosine against any vector of `to`.
inline double directed_greedy(const std::vector<std::span<const float>>& from,
                              const std::vector<std::span<const float>>& to) {
  double sum = 0.0;
  for (const auto& a : from) {
    double best = -1.0;
    for (const auto& b : to) best = std::max(best, cosine(a, b));
    sum += best;
  }
  return sum / static_cast<double>(from.size());
}

}  // namespace detail

inline double greedy_matching_pair(TokenSpan candidate, TokenSpan reference, const VectorStore& store,
                                   const EmbeddingOptions& opts = {}) {
  auto c = detail::embeddable(candidate, store, opts);
  auto r = detail::embeddable(reference, store, opts);
  if (c.empty() || r.empty()) {
    throw Error(Errc::NoEmbeddableTokens, c.empty() ? "candidate has no in-vocabulary tokens"
                                                    : "reference has no in-vocabulary tokens");
  }
  return (detail::directed_greedy(c, r) + detail::directed_greedy(r, c)) / 2.0;
}

// Multi-reference: the best reference wins.
inline MeasureScore greedy_matching(TokenSpan candidate, std::span<const TokenSpan> references,
                                    const VectorStore& store, const EmbeddingOptions& opts = {}) {
  if (references.empty()) throw Error(Errc::EmptyText, "no reference given");
  std::optional<double> best;
  for (TokenSpan ref : references) {
    double s = greedy_matching_pair(candidate, ref, store, opts);
    if (!best || s > *best) best = s;
  }
  return {"greedy_matching", {{"greedy_matching", *best}}};
}

inline MeasureScore greedy_matching(TokenSpan candidate, TokenSpan reference, const VectorStore& store,
                                    const EmbeddingOptions& opts = {}) {
  return greedy_matching(candidate, std::span<const TokenSpan>(&reference, 1), store, opts);
}

// Cosine of the mean-pooled embeddings; zero when either side pools to zero.
inline MeasureScore cosine_sim(TokenSpan candidate, std::span<const TokenSpan> references, const VectorStore& store) {
  PooledEmbedding c = pool_mean(candidate, store);
  double best = 0.0;
  bool first = true;
  for (TokenSpan ref : references) {
    PooledEmbedding r = pool_mean(ref, store);
    double s = cosine(c.vector, r.vector);
    if (first || s > best) best = s;
    first = false;
  }
  return {"cosine_sim", {{"cosine_sim", best}}};
}

inline MeasureScore cosine_sim(TokenSpan candidate, TokenSpan reference, const VectorStore& store) {
  return cosine_sim(candidate, std::span<const TokenSpan>(&reference, 1), store);
}

}  // namespace swb::measures
