#pragma once

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "swb/embeddings.hpp"
#include "swb/error.hpp"
#include "swb/summarizers/featuresum.hpp"
#include "swb/summarizers/pagerank.hpp"
#include "swb/summarizers/types.hpp"
#include "swb/text/document.hpp"

namespace swb::summarizers {

inline std::string model_id(RankVariant v) {
  switch (v) {
    case RankVariant::Plain: return "textrank";
    case RankVariant::Position: return "positionrank";
    case RankVariant::Topic: return "topicrank";
    case RankVariant::Biased: return "biased_textrank";
  }
  return "textrank";
}

// Overlap similarity of two sentences: shared content stem types divided by
// ln|S_i| + ln|S_j| (word counts). Zero when either has fewer than two words.
inline double sentence_similarity(const std::set<std::string>& types_a, std::size_t words_a,
                                  const std::set<std::string>& types_b, std::size_t words_b) {
  if (words_a < 2 || words_b < 2) return 0.0;
  double shared = static_cast<double>(detail::shared_count(types_a, types_b));
  if (shared == 0.0) return 0.0;
  return shared / (std::log(static_cast<double>(words_a)) + std::log(static_cast<double>(words_b)));
}

inline Matrix similarity_graph(const text::Document& doc) {
  const std::size_t n = doc.sentences.size();
  std::vector<std::set<std::string>> types(n);
  std::vector<std::size_t> words(n);
  for (std::size_t i = 0; i < n; ++i) {
    types[i] = detail::stem_types(doc.sentences[i]);
    words[i] = doc.sentences[i].word_count();
  }
  Matrix w(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = sentence_similarity(types[i], words[i], types[j], words[j]);
      w(i, j) = s;
      w(j, i) = s;
    }
  }
  return w;
}

namespace detail {

inline std::vector<double> normalize_or_uniform(std::vector<double> v) {
  double total = 0.0;
  for (double x : v) total += x;
  if (total <= 0.0) {
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
  } else {
    for (double& x : v) x /= total;
  }
  return v;
}

}  // namespace detail

// Restart distribution for each variant. Biased needs `store` and a focus.
inline std::vector<double> teleport_vector(const text::Document& doc, const RankConfig& cfg,
                                           const VectorStore* store) {
  const std::size_t n = doc.sentences.size();
  std::vector<double> t(n, 1.0);
  switch (cfg.variant) {
    case RankVariant::Plain:
      break;
    case RankVariant::Position:
      for (std::size_t i = 0; i < n; ++i) t[i] = 1.0 / static_cast<double>(i + 1);
      break;
    case RankVariant::Topic: {
      const text::Sentence& topic =
          doc.title && !detail::stem_types(*doc.title).empty() ? *doc.title : doc.sentences.front();
      auto topic_types = detail::stem_types(topic);
      std::size_t topic_words = topic.word_count();
      for (std::size_t i = 0; i < n; ++i) {
        t[i] = sentence_similarity(detail::stem_types(doc.sentences[i]), doc.sentences[i].word_count(),
                                   topic_types, topic_words);
      }
      break;
    }
    case RankVariant::Biased: {
      if (!cfg.focus || text::tokenize_text(*cfg.focus).empty()) {
        throw Error(Errc::FocusMissing, "biased_textrank requires a focus text");
      }
      if (store == nullptr) throw Error(Errc::MissingEmbeddings, "biased_textrank needs word vectors");
      auto focus_tokens = text::tokenize_text(*cfg.focus);
      PooledEmbedding focus = pool_mean(focus_tokens, *store);
      for (std::size_t i = 0; i < n; ++i) {
        PooledEmbedding s = pool_mean(doc.sentences[i].tokens, *store);
        t[i] = std::max(0.0, cosine(s.vector, focus.vector));
      }
      break;
    }
  }
  return detail::normalize_or_uniform(std::move(t));
}

inline SummaryResult textrank_summarize(const text::Document& doc, const RankConfig& cfg, const Budget& budget,
                                        const VectorStore* store = nullptr) {
  cfg.validate();
  budget.validate();
  if (doc.sentences.empty()) throw Error(Errc::EmptyDocument, "document has no sentences");
  std::vector<double> teleport = teleport_vector(doc, cfg, store);
  Matrix graph = similarity_graph(doc);
  PageRankResult pr = pagerank(graph, teleport, cfg);
  auto ranking = rank_by_score(pr.scores, 1e-12);
  SummaryResult result = make_result(model_id(cfg.variant), doc, take_budget(doc, ranking, budget));
  result.rank_scores = std::move(pr.scores);
  return result;
}

}  // namespace swb::summarizers
