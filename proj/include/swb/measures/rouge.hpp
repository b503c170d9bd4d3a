#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "swb/measures/score.hpp"
#include "swb/text/ngrams.hpp"

namespace swb::measures {

enum class RougeVariant { One, Two, L };

inline std::string rouge_prefix(RougeVariant v) {
  switch (v) {
    case RougeVariant::One: return "rouge_1";
    case RougeVariant::Two: return "rouge_2";
    case RougeVariant::L: return "rouge_l";
  }
  return "rouge";
}

struct RougeOptions {
  bool use_stems = false;
};

// Clipped multiset intersection size of the n-gram bags.
inline std::size_t clipped_matches(const text::NGramCounts& candidate, const text::NGramCounts& reference) {
  std::size_t matches = 0;
  for (const auto& [gram, count] : candidate.counts) matches += std::min(count, reference.count(gram));
  return matches;
}

inline PRF rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference, std::size_t n) {
  auto c = text::ngrams(candidate, n);
  auto r = text::ngrams(reference, n);
  return make_prf(static_cast<double>(clipped_matches(c, r)), static_cast<double>(c.total()),
                  static_cast<double>(r.total()));
}

// Token-level longest common subsequence length, two-row DP.
inline std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline PRF rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference) {
  return make_prf(static_cast<double>(lcs_length(candidate, reference)), static_cast<double>(candidate.size()),
                  static_cast<double>(reference.size()));
}

inline PRF rouge_terms(std::span<const std::string> candidate, std::span<const std::string> reference,
                       RougeVariant variant) {
  switch (variant) {
    case RougeVariant::One: return rouge_n(candidate, reference, 1);
    case RougeVariant::Two: return rouge_n(candidate, reference, 2);
    case RougeVariant::L: return rouge_l(candidate, reference);
  }
  return {};
}

inline void put_prf(MeasureScore& score, const std::string& prefix, const PRF& prf) {
  score.values[prefix + "_precision"] = prf.precision;
  score.values[prefix + "_recall"] = prf.recall;
  score.values[prefix + "_f1"] = prf.f1;
}

// Multi-reference: the reference giving the highest F1 wins.
inline MeasureScore rouge(TokenSpan candidate, std::span<const TokenSpan> references, RougeVariant variant,
                          const RougeOptions& opts = {}) {
  require_text(candidate, references);
  auto cand = text::terms_of(candidate, opts.use_stems);
  PRF best;
  bool first = true;
  for (TokenSpan ref : references) {
    auto r = text::terms_of(ref, opts.use_stems);
    PRF prf = rouge_terms(cand, r, variant);
    if (first || prf.f1 > best.f1) best = prf;
    first = false;
  }
  MeasureScore score{"rouge", {}};
  put_prf(score, rouge_prefix(variant), best);
  return score;
}

inline MeasureScore rouge(TokenSpan candidate, TokenSpan reference, RougeVariant variant,
                          const RougeOptions& opts = {}) {
  return rouge(candidate, std::span<const TokenSpan>(&reference, 1), variant, opts);
}

// ROUGE-1, ROUGE-2 and ROUGE-L together, as reported by the "rouge" measure.
inline MeasureScore rouge_all(TokenSpan candidate, std::span<const TokenSpan> references,
                              const RougeOptions& opts = {}) {
  MeasureScore score{"rouge", {}};
  for (RougeVariant v : {RougeVariant::One, RougeVariant::Two, RougeVariant::L}) {
    auto part = rouge(candidate, references, v, opts);
    score.values.insert(part.values.begin(), part.values.end());
  }
  return score;
}

}  // namespace swb::measures
