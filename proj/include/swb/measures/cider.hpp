#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "swb/measures/score.hpp"
#include "swb/text/ngrams.hpp"

namespace swb::measures {

inline constexpr std::size_t kCiderMaxOrder = 4;

struct CiderExample {
  std::vector<std::string> candidate;
  std::vector<std::vector<std::string>> references;
};

// Document frequencies of every n-gram (n = 1..4) over the batch's
// reference sets; one reference set counts as one document.
class CiderCorpusModel {
 public:
  static CiderCorpusModel build(std::span<const CiderExample> batch) {
    CiderCorpusModel model;
    model.corpus_size_ = batch.size();
    for (const CiderExample& ex : batch) {
      for (std::size_t n = 1; n <= kCiderMaxOrder; ++n) {
        std::set<text::NGram> seen;
        for (const auto& ref : ex.references) {
          auto counts = text::ngrams(std::span<const std::string>(ref), n);
          for (const auto& [gram, _] : counts.counts) seen.insert(gram);
        }
        for (const auto& gram : seen) ++model.doc_freq_[n - 1][gram];
      }
    }
    return model;
  }

  std::size_t corpus_size() const { return corpus_size_; }

  std::size_t doc_freq(const text::NGram& gram) const {
    if (gram.empty() || gram.size() > kCiderMaxOrder) return 0;
    const auto& table = doc_freq_[gram.size() - 1];
    auto it = table.find(gram);
    return it == table.end() ? 0 : it->second;
  }

  // ln(M / max(1, df))
  double idf(const text::NGram& gram) const {
    double df = std::max<double>(1.0, static_cast<double>(doc_freq(gram)));
    return std::log(static_cast<double>(corpus_size_) / df);
  }

  // Similarity at order n, or nullopt when both vectors carry no weight.
  std::optional<double> level_similarity(std::span<const std::string> candidate,
                                         std::span<const std::string> reference, std::size_t n) const {
    auto c = text::ngrams(candidate, n);
    auto r = text::ngrams(reference, n);
    auto cvec = weights(c);
    auto rvec = weights(r);
    double cn = 0.0;
    double rn = 0.0;
    for (const auto& [_, w] : cvec) cn += w * w;
    for (const auto& [_, w] : rvec) rn += w * w;
    if (cn == 0.0 && rn == 0.0) return std::nullopt;
    if (cn == 0.0 || rn == 0.0) return 0.0;
    // candidate weights clipped to the reference's before the dot product
    double dot = 0.0;
    for (const auto& [gram, w] : cvec) {
      auto it = rvec.find(gram);
      if (it != rvec.end()) dot += std::min(w, it->second) * it->second;
    }
    if (dot == cn && cn == rn) return 1.0;
    return std::clamp(dot / (std::sqrt(cn) * std::sqrt(rn)), 0.0, 1.0);
  }

  // 10 x mean over scored levels of the reference-averaged similarity.
  double score(const CiderExample& ex) const {
    double level_sum = 0.0;
    std::size_t levels = 0;
    for (std::size_t n = 1; n <= kCiderMaxOrder; ++n) {
      double ref_sum = 0.0;
      std::size_t refs = 0;
      for (const auto& ref : ex.references) {
        auto sim = level_similarity(ex.candidate, ref, n);
        if (!sim) continue;
        ref_sum += *sim;
        ++refs;
      }
      if (refs == 0) continue;
      level_sum += ref_sum / static_cast<double>(refs);
      ++levels;
    }
    if (levels == 0) return 0.0;
    return 10.0 * level_sum / static_cast<double>(levels);
  }

 private:
  std::map<text::NGram, double> weights(const text::NGramCounts& counts) const {
    std::map<text::NGram, double> out;
    double total = static_cast<double>(counts.total());
    if (total == 0.0) return out;
    for (const auto& [gram, count] : counts.counts) {
      double w = static_cast<double>(count) / total * idf(gram);
      if (w > 0.0) out.emplace(gram, w);
    }
    return out;
  }

  std::size_t corpus_size_ = 0;
  std::array<std::map<text::NGram, std::size_t>, kCiderMaxOrder> doc_freq_;
};

inline std::vector<MeasureScore> cider(std::span<const CiderExample> batch) {
  if (batch.empty()) throw Error(Errc::EmptyBatch, "cider needs at least one example");
  for (const CiderExample& ex : batch) {
    if (ex.candidate.empty() || ex.references.empty()) throw Error(Errc::EmptyText, "empty cider example");
    for (const auto& r : ex.references) {
      if (r.empty()) throw Error(Errc::EmptyText, "empty cider reference");
    }
  }
  auto model = CiderCorpusModel::build(batch);
  std::vector<MeasureScore> out;
  out.reserve(batch.size());
  for (const CiderExample& ex : batch) out.push_back({"cider", {{"cider", model.score(ex)}}});
  return out;
}

}  // namespace swb::measures
