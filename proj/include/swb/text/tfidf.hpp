#pragma once

#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "swb/error.hpp"
#include "swb/text/document.hpp"

namespace swb::text {

// Smoothed inverse document frequency: idf(t) = ln((1 + N) / (1 + df(t))) + 1.
// Unseen terms take df = 0.
class TfIdfModel {
 public:
  static TfIdfModel fit(std::span<const std::vector<std::string>> term_docs) {
    if (term_docs.empty()) throw Error(Errc::EmptyCorpus, "corpus has no documents");
    TfIdfModel model;
    model.doc_count_ = term_docs.size();
    for (const auto& doc : term_docs) {
      std::set<std::string> seen(doc.begin(), doc.end());
      for (const auto& term : seen) ++model.doc_freq_[term];
    }
    return model;
  }

  std::size_t doc_count() const { return doc_count_; }

  std::size_t doc_freq(const std::string& term) const {
    auto it = doc_freq_.find(term);
    return it == doc_freq_.end() ? 0 : it->second;
  }

  double idf(const std::string& term) const {
    return std::log((1.0 + static_cast<double>(doc_count_)) /
                    (1.0 + static_cast<double>(doc_freq(term)))) +
           1.0;
  }

  const std::map<std::string, std::size_t>& doc_freqs() const { return doc_freq_; }

 private:
  std::size_t doc_count_ = 0;
  std::map<std::string, std::size_t> doc_freq_;
};

// Stems of the non-stopword, non-punctuation tokens.
inline std::vector<std::string> content_stems(std::span<const Token> tokens) {
  std::vector<std::string> out;
  for (const Token& t : tokens) {
    if (t.is_content()) out.push_back(t.stem);
  }
  return out;
}

// One document per corpus entry.
inline TfIdfModel build_tfidf(std::span<const Document> corpus) {
  std::vector<std::vector<std::string>> term_docs;
  term_docs.reserve(corpus.size());
  for (const Document& doc : corpus) {
    auto tokens = doc.all_tokens();
    term_docs.push_back(content_stems(tokens));
  }
  return TfIdfModel::fit(term_docs);
}

// Document-internal mode: every sentence counts as a document.
inline TfIdfModel build_sentence_tfidf(const Document& doc) {
  std::vector<std::vector<std::string>> term_docs;
  term_docs.reserve(doc.sentences.size());
  for (const Sentence& s : doc.sentences) term_docs.push_back(content_stems(s.tokens));
  return TfIdfModel::fit(term_docs);
}

}  // namespace swb::text
