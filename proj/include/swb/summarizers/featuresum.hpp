#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "swb/error.hpp"
#include "swb/summarizers/types.hpp"
#include "swb/text/document.hpp"
#include "swb/text/tfidf.hpp"

namespace swb::summarizers {

struct FeatureConfig {
  std::set<Feature> enabled{std::begin(kAllFeatures), std::end(kAllFeatures)};
  double epsilon = 0.001;

  void validate() const {
    if (enabled.empty()) throw Error(Errc::InvalidConfig, "at least one feature must be enabled");
    if (!(epsilon > 0.0 && epsilon <= 0.1)) throw Error(Errc::InvalidConfig, "epsilon must lie in (0, 0.1]");
  }
};

inline Feature feature_from_string(const std::string& name) {
  for (Feature f : kAllFeatures) {
    if (to_string(f) == name) return f;
  }
  throw Error(Errc::InvalidConfig, "unknown feature '" + name + "'");
}

// Product of epsilon-floored values over `enabled`. Features outside the set
// are never read.
inline double combine_features(const std::map<Feature, double>& values, const std::set<Feature>& enabled,
                               double epsilon) {
  double product = 1.0;
  for (Feature f : enabled) product *= std::max(values.at(f), epsilon);
  return product;
}

namespace detail {

inline std::set<std::string> stem_types(const text::Sentence& s) {
  std::set<std::string> types;
  for (const text::Token& t : s.tokens) {
    if (t.is_content()) types.insert(t.stem);
  }
  return types;
}

inline std::size_t shared_count(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t n = 0;
  for (const auto& x : a) n += b.count(x);
  return n;
}

}  // namespace detail

// The feature set actually scored: title_overlap drops out when the document
// has no title with content words.
inline std::set<Feature> effective_features(const text::Document& doc, const FeatureConfig& cfg) {
  std::set<Feature> enabled = cfg.enabled;
  if (enabled.count(Feature::TitleOverlap) &&
      (!doc.title || detail::stem_types(*doc.title).empty())) {
    enabled.erase(Feature::TitleOverlap);
  }
  return enabled;
}

inline std::vector<SentenceScore> featuresum_features(const text::Document& doc, const FeatureConfig& cfg) {
  cfg.validate();
  const std::size_t n = doc.sentences.size();
  if (n == 0) throw Error(Errc::EmptyDocument, "document has no sentences");
  const std::set<Feature> enabled = effective_features(doc, cfg);
  auto on = [&](Feature f) { return enabled.count(f) != 0; };

  std::vector<SentenceScore> scores(n);
  std::vector<std::set<std::string>> types(n);
  std::vector<std::size_t> words(n, 0);
  std::size_t max_words = 0;
  for (std::size_t i = 0; i < n; ++i) {
    scores[i].index = i;
    types[i] = detail::stem_types(doc.sentences[i]);
    words[i] = doc.sentences[i].word_count();
    max_words = std::max(max_words, words[i]);
  }

  if (on(Feature::TfIdf)) {
    text::TfIdfModel model = text::build_sentence_tfidf(doc);
    std::vector<double> mean(n, 0.0);
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::map<std::string, std::size_t> tf;
      std::size_t content = 0;
      for (const text::Token& t : doc.sentences[i].tokens) {
        if (!t.is_content()) continue;
        ++tf[t.stem];
        ++content;
      }
      double sum = 0.0;
      for (const auto& [term, count] : tf) {
        // each of the `count` occurrences contributes tf * idf
        sum += static_cast<double>(count) * static_cast<double>(count) * model.idf(term);
      }
      mean[i] = content == 0 ? 0.0 : sum / static_cast<double>(content);
      best = std::max(best, mean[i]);
    }
    for (std::size_t i = 0; i < n; ++i) scores[i].features[Feature::TfIdf] = best > 0.0 ? mean[i] / best : 0.0;
  }

  if (on(Feature::ContentUnits)) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t units = 0;
      for (const text::Token& t : doc.sentences[i].tokens) {
        if (!t.is_punct && (t.is_numeric || t.is_capitalized)) ++units;
      }
      scores[i].features[Feature::ContentUnits] =
          words[i] == 0 ? 0.0 : static_cast<double>(units) / static_cast<double>(words[i]);
    }
  }

  if (on(Feature::Position)) {
    for (std::size_t i = 0; i < n; ++i) {
      scores[i].features[Feature::Position] = static_cast<double>(n - i) / static_cast<double>(n);
    }
  }

  if (on(Feature::Connectivity)) {
    for (std::size_t i = 0; i < n; ++i) {
      double value = 0.0;
      if (n > 1 && !types[i].empty()) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          sum += static_cast<double>(detail::shared_count(types[i], types[j])) /
                 static_cast<double>(types[i].size());
        }
        value = std::min(1.0, sum / static_cast<double>(n - 1));
      }
      scores[i].features[Feature::Connectivity] = value;
    }
  }

  if (on(Feature::NonstopRatio)) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t content = 0;
      for (const text::Token& t : doc.sentences[i].tokens) content += t.is_content() ? 1 : 0;
      scores[i].features[Feature::NonstopRatio] =
          words[i] == 0 ? 0.0 : static_cast<double>(content) / static_cast<double>(words[i]);
    }
  }

  if (on(Feature::RelLength)) {
    for (std::size_t i = 0; i < n; ++i) {
      scores[i].features[Feature::RelLength] =
          max_words == 0 ? 0.0 : static_cast<double>(words[i]) / static_cast<double>(max_words);
    }
  }

  if (on(Feature::TitleOverlap)) {
    auto title = detail::stem_types(*doc.title);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i].features[Feature::TitleOverlap] =
          static_cast<double>(detail::shared_count(types[i], title)) / static_cast<double>(title.size());
    }
  }

  for (SentenceScore& s : scores) s.final_score = combine_features(s.features, enabled, cfg.epsilon);
  return scores;
}

inline SummaryResult featuresum_summarize(const text::Document& doc, const FeatureConfig& cfg,
                                          const Budget& budget) {
  budget.validate();
  auto scores = featuresum_features(doc, cfg);
  std::vector<double> finals;
  finals.reserve(scores.size());
  for (const SentenceScore& s : scores) finals.push_back(s.final_score);
  auto ranking = rank_by_score(finals);
  SummaryResult result = make_result("featuresum", doc, take_budget(doc, ranking, budget));
  result.scores = std::move(scores);
  result.rank_scores = std::move(finals);
  return result;
}

}  // namespace swb::summarizers
