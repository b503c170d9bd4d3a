#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swb/error.hpp"
#include "swb/text/document.hpp"

namespace swb::summarizers {

struct Budget {
  enum class Mode { Ratio, Sentences, Words };

  Mode mode = Mode::Ratio;
  double value = 0.2;

  static Budget ratio(double r) { return {Mode::Ratio, r}; }
  static Budget sentences(std::size_t k) { return {Mode::Sentences, static_cast<double>(k)}; }
  static Budget words(std::size_t w) { return {Mode::Words, static_cast<double>(w)}; }

  void validate() const {
    switch (mode) {
      case Mode::Ratio:
        if (!(value > 0.0 && value <= 1.0)) {
          throw Error(Errc::InvalidConfig, "ratio budget must lie in (0, 1]");
        }
        break;
      case Mode::Sentences:
      case Mode::Words:
        if (!(value >= 1.0) || value != std::floor(value)) {
          throw Error(Errc::InvalidConfig, "sentence/word budgets must be integers >= 1");
        }
        break;
    }
  }

  // Sentence cap for the count-based modes; words mode has none.
  std::optional<std::size_t> sentence_cap(std::size_t n) const {
    switch (mode) {
      case Mode::Ratio: {
        // 1e-9 keeps 0.2 * 10 from rounding up to 3
        auto k = static_cast<std::size_t>(std::ceil(value * static_cast<double>(n) - 1e-9));
        return std::clamp<std::size_t>(k, 1, n);
      }
      case Mode::Sentences:
        return std::min(static_cast<std::size_t>(value), n);
      case Mode::Words:
        return std::nullopt;
    }
    return std::nullopt;
  }
};

inline std::string to_string(Budget::Mode mode) {
  switch (mode) {
    case Budget::Mode::Ratio: return "ratio";
    case Budget::Mode::Sentences: return "sentences";
    case Budget::Mode::Words: return "words";
  }
  return "ratio";
}

inline Budget::Mode budget_mode_from_string(const std::string& s) {
  if (s == "ratio") return Budget::Mode::Ratio;
  if (s == "sentences") return Budget::Mode::Sentences;
  if (s == "words") return Budget::Mode::Words;
  throw Error(Errc::InvalidConfig, "unknown budget mode '" + s + "'");
}

enum class Feature { TfIdf, ContentUnits, Position, Connectivity, NonstopRatio, RelLength, TitleOverlap };

inline constexpr Feature kAllFeatures[] = {Feature::TfIdf,        Feature::ContentUnits,
                                           Feature::Position,     Feature::Connectivity,
                                           Feature::NonstopRatio, Feature::RelLength,
                                           Feature::TitleOverlap};

inline std::string to_string(Feature f) {
  switch (f) {
    case Feature::TfIdf: return "tfidf";
    case Feature::ContentUnits: return "content_units";
    case Feature::Position: return "position";
    case Feature::Connectivity: return "connectivity";
    case Feature::NonstopRatio: return "nonstop_ratio";
    case Feature::RelLength: return "rel_length";
    case Feature::TitleOverlap: return "title_overlap";
  }
  return "";
}

struct SentenceScore {
  std::size_t index = 0;
  std::map<Feature, double> features;
  double final_score = 0.0;

  bool operator==(const SentenceScore&) const = default;
};

struct SummaryResult {
  std::string model_id;
  std::vector<std::size_t> selected;  // ascending
  std::string text;
  std::vector<SentenceScore> scores;  // FeatureSum only
  std::vector<double> rank_scores;    // one per sentence for the graph/cluster models

  bool operator==(const SummaryResult&) const = default;
};

// Sentence indices ordered by descending score; equal scores keep the
// smaller index first. With `tie_tolerance` > 0, scores closer than that
// (relative to the largest score) count as equal.
inline std::vector<std::size_t> rank_by_score(std::span<const double> scores,
                                              double tie_tolerance = 0.0) {
  std::vector<double> keys(scores.begin(), scores.end());
  if (tie_tolerance > 0.0 && !keys.empty()) {
    double scale = *std::max_element(keys.begin(), keys.end());
    if (scale > 0.0) {
      for (double& k : keys) k = std::round(k / (scale * tie_tolerance));
    }
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
  return order;
}

// Takes the budgeted prefix of `ranking`. Words mode keeps the longest prefix
// whose word total fits, and always at least one sentence.
inline std::vector<std::size_t> take_budget(const text::Document& doc,
                                            std::span<const std::size_t> ranking,
                                            const Budget& budget) {
  budget.validate();
  std::vector<std::size_t> chosen;
  if (ranking.empty()) return chosen;
  if (auto cap = budget.sentence_cap(ranking.size())) {
    chosen.assign(ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(*cap));
  } else {
    auto limit = static_cast<std::size_t>(budget.value);
    std::size_t used = 0;
    for (std::size_t idx : ranking) {
      std::size_t words = doc.sentences[idx].word_count();
      if (!chosen.empty() && used + words > limit) break;
      chosen.push_back(idx);
      used += words;
      if (used >= limit) break;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

inline std::string join_sentences(const text::Document& doc, std::span<const std::size_t> selected) {
  std::string out;
  for (std::size_t idx : selected) {
    if (!out.empty()) out.push_back(' ');
    out.append(doc.sentence_text(idx));
  }
  return out;
}

inline SummaryResult make_result(std::string model_id, const text::Document& doc,
                                 std::vector<std::size_t> selected) {
  SummaryResult r;
  r.model_id = std::move(model_id);
  r.text = join_sentences(doc, selected);
  r.selected = std::move(selected);
  return r;
}

}  // namespace swb::summarizers
