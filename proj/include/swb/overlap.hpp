#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "swb/embeddings.hpp"
#include "swb/error.hpp"
#include "swb/measures/builtin.hpp"
#include "swb/text/document.hpp"

namespace swb::overlap {

// Half-open token range.
struct TokenRange {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool operator==(const TokenRange&) const = default;
};

struct SpanPair {
  std::size_t group = 0;
  TokenRange left;
  std::vector<TokenRange> right;
  std::size_t length = 0;

  bool operator==(const SpanPair&) const = default;
};

struct OverlapOptions {
  std::size_t min_n = 2;
  bool preserve_duplicates = false;
  bool ignore_stopwords = false;

  void validate() const {
    if (min_n < 1) throw Error(Errc::InvalidConfig, "min_n must be >= 1");
  }
};

// Greedy longest-first pairing of common normalized token runs. Each step
// takes the longest run (>= min_n) over unmatched positions of `a` and, unless
// duplicates are preserved, unmatched positions of `b`; ties go to the
// leftmost start in `a`, then in `b`.
inline std::vector<SpanPair> lexical_spans(std::span<const text::Token> a, std::span<const text::Token> b,
                                           const OverlapOptions& opts = {}) {
  opts.validate();
  std::vector<SpanPair> pairs;
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0 || m == 0) return pairs;

  // intern the normalized forms so the DP compares integers
  std::vector<std::uint32_t> ida(n);
  std::vector<std::uint32_t> idb(m);
  {
    std::unordered_map<std::string_view, std::uint32_t> ids;
    for (std::size_t i = 0; i < n; ++i) {
      ida[i] = ids.try_emplace(a[i].normalized, static_cast<std::uint32_t>(ids.size())).first->second;
    }
    for (std::size_t j = 0; j < m; ++j) {
      auto it = ids.find(b[j].normalized);
      idb[j] = it == ids.end() ? UINT32_MAX : it->second;
    }
  }

  auto filler = [&](std::size_t i) { return a[i].is_stopword || a[i].is_punct; };
  std::vector<bool> used_a(n, false);
  std::vector<bool> used_b(m, false);
  std::vector<std::uint32_t> run((n + 1) * (m + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return run[i * (m + 1) + j]; };

  while (true) {
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = m; j-- > 0;) {
        bool ok = !used_a[i] && (opts.preserve_duplicates || !used_b[j]) && ida[i] == idb[j];
        at(i, j) = ok ? at(i + 1, j + 1) + 1 : 0;
      }
    }
    std::size_t best_len = 0;
    std::size_t best_i = 0;
    std::size_t best_j = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        std::size_t len = at(i, j);
        if (len < opts.min_n || len <= best_len) continue;
        if (opts.ignore_stopwords) {
          bool all_filler = true;
          for (std::size_t k = i; k < i + len && all_filler; ++k) all_filler = filler(k);
          if (all_filler) continue;
        }
        best_len = len;
        best_i = i;
        best_j = j;
      }
    }
    if (best_len == 0) break;
    SpanPair p;
    p.group = pairs.size();
    p.left = {best_i, best_i + best_len};
    p.right = {{best_j, best_j + best_len}};
    p.length = best_len;
    for (std::size_t k = 0; k < best_len; ++k) {
      used_a[best_i + k] = true;
      used_b[best_j + k] = true;
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

struct SemanticLink {
  std::size_t summary_index = 0;
  std::size_t source_index = 0;
  double similarity = 0.0;

  bool operator==(const SemanticLink&) const = default;
};

// Links each summary sentence to its most similar source sentence (pooled
// embedding cosine) when the similarity reaches `threshold`.
inline std::vector<SemanticLink> semantic_links(std::span<const text::Sentence> summary,
                                                std::span<const text::Sentence> source, const VectorStore& store,
                                                double threshold = 0.6) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error(Errc::InvalidConfig, "threshold must lie in [0, 1]");
  std::vector<PooledEmbedding> pooled;
  pooled.reserve(source.size());
  for (const text::Sentence& s : source) pooled.push_back(pool_mean(s.tokens, store));
  std::vector<SemanticLink> links;
  for (const text::Sentence& s : summary) {
    PooledEmbedding e = pool_mean(s.tokens, store);
    if (e.support == 0) continue;
    std::size_t best = source.size();
    double best_sim = -2.0;
    for (std::size_t j = 0; j < source.size(); ++j) {
      if (pooled[j].support == 0) continue;
      double sim = cosine(e.vector, pooled[j].vector);
      if (sim > best_sim) {
        best_sim = sim;
        best = j;
      }
    }
    if (best < source.size() && best_sim >= threshold) links.push_back({s.index, source[best].index, best_sim});
  }
  return links;
}

struct AgreementMatrix {
  std::vector<std::string> models;
  std::vector<std::vector<double>> matrix;  // [candidate][reference]
  std::string measure;
};

// Pairwise agreement: entry (i, j) scores summary i as candidate against
// summary j as reference with the given sub-score; the diagonal is 1.
inline AgreementMatrix agreement_matrix(std::span<const std::pair<std::string, std::string>> summaries,
                                        const std::string& subscore = "rouge_1_f1",
                                        const measures::MeasureContext& ctx = {}) {
  auto measure = measures::measure_of_subscore(subscore);
  if (!measure || *measure == "cider") throw Error(Errc::UnknownMeasure, subscore);
  if (summaries.size() < 2) throw Error(Errc::InvalidConfig, "agreement needs at least two summaries");
  AgreementMatrix out;
  out.measure = subscore;
  const std::size_t k = summaries.size();
  out.matrix.assign(k, std::vector<double>(k, 1.0));
  for (const auto& s : summaries) out.models.push_back(s.first);
  std::vector<measures::TextPair> batch;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) batch.push_back({summaries[i].second, {summaries[j].second}});
    }
  }
  auto scores = measures::evaluate_builtin(*measure, batch, ctx);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const auto& outcome = scores[cursor++];
      double v = 0.0;
      if (outcome.ok()) {
        auto it = outcome.values.find(subscore);
        if (it != outcome.values.end()) v = it->second;
      }
      out.matrix[i][j] = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace swb::overlap
