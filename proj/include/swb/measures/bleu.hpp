#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "swb/measures/score.hpp"
#include "swb/text/ngrams.hpp"

namespace swb::measures {

struct BleuOptions {
  bool smoothing = false;  // add-one on orders >= 2
};

struct BleuStats {
  std::size_t max_order = 0;  // min(4, candidate length)
  std::array<std::size_t, 4> clipped{};
  std::array<std::size_t, 4> totals{};
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;  // closest to the candidate, shorter on ties
};

// Clipped n-gram counts: each candidate n-gram is capped by its maximum
// count in any single reference.
inline BleuStats bleu_stats(std::span<const std::string> candidate,
                            std::span<const std::vector<std::string>> references) {
  BleuStats stats;
  stats.candidate_length = candidate.size();
  stats.max_order = std::min<std::size_t>(4, candidate.size());
  std::size_t best_diff = static_cast<std::size_t>(-1);
  for (const auto& ref : references) {
    std::size_t diff = ref.size() > candidate.size() ? ref.size() - candidate.size() : candidate.size() - ref.size();
    if (diff < best_diff || (diff == best_diff && ref.size() < stats.reference_length)) {
      best_diff = diff;
      stats.reference_length = ref.size();
    }
  }
  for (std::size_t n = 1; n <= stats.max_order; ++n) {
    auto cand = text::ngrams(candidate, n);
    std::map<text::NGram, std::size_t> max_ref;
    for (const auto& ref : references) {
      auto r = text::ngrams(std::span<const std::string>(ref), n);
      for (const auto& [gram, count] : r.counts) {
        auto& slot = max_ref[gram];
        slot = std::max(slot, count);
      }
    }
    for (const auto& [gram, count] : cand.counts) {
      auto it = max_ref.find(gram);
      stats.clipped[n - 1] += std::min(count, it == max_ref.end() ? std::size_t{0} : it->second);
      stats.totals[n - 1] += count;
    }
  }
  return stats;
}

inline double bleu_from_stats(const BleuStats& stats, const BleuOptions& opts = {}) {
  if (stats.max_order == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= stats.max_order; ++n) {
    double clipped = static_cast<double>(stats.clipped[n - 1]);
    double total = static_cast<double>(stats.totals[n - 1]);
    if (opts.smoothing && n >= 2) {
      clipped += 1.0;
      total += 1.0;
    }
    if (clipped == 0.0) return 0.0;
    log_sum += std::log(clipped / total);
  }
  double c = static_cast<double>(stats.candidate_length);
  double r = static_cast<double>(stats.reference_length);
  double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  double score = bp * std::exp(log_sum / static_cast<double>(stats.max_order));
  return std::clamp(score, 0.0, 1.0);
}

inline MeasureScore bleu(TokenSpan candidate, std::span<const TokenSpan> references, const BleuOptions& opts = {}) {
  require_text(candidate, references);
  auto cand = text::terms_of(candidate, false);
  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (TokenSpan r : references) refs.push_back(text::terms_of(r, false));
  return {"bleu", {{"bleu", bleu_from_stats(bleu_stats(cand, refs), opts)}}};
}

inline MeasureScore bleu(TokenSpan candidate, TokenSpan reference, const BleuOptions& opts = {}) {
  return bleu(candidate, std::span<const TokenSpan>(&reference, 1), opts);
}

}  // namespace swb::measures
