#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swb/embeddings.hpp"
#include "swb/measures/bleu.hpp"
#include "swb/measures/cider.hpp"
#include "swb/measures/meteor.hpp"
#include "swb/measures/rouge.hpp"
#include "swb/measures/semantic.hpp"
#include "swb/text/document.hpp"

namespace swb::measures {

// A candidate with its references, as raw text.
struct TextPair {
  std::string candidate;
  std::vector<std::string> references;
};

// Per-example outcome: sub-scores, or the reason the example failed.
struct ScoreOutcome {
  std::map<std::string, double> values;
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
  bool operator==(const ScoreOutcome&) const = default;
};

struct MeasureContext {
  const VectorStore* store = nullptr;
  const SynonymLexicon* lexicon = nullptr;
  RougeOptions rouge;
  BleuOptions bleu;
  EmbeddingOptions embedding;
};

inline const std::vector<std::string>& builtin_measure_ids() {
  static const std::vector<std::string> ids{"rouge", "bleu", "meteor", "cider", "greedy_matching", "cosine_sim"};
  return ids;
}

inline bool needs_embeddings(const std::string& measure_id) {
  return measure_id == "greedy_matching" || measure_id == "cosine_sim";
}

// Sub-score names each built-in measure reports.
inline std::vector<std::string> builtin_subscores(const std::string& measure_id) {
  if (measure_id == "rouge") {
    std::vector<std::string> out;
    for (const char* prefix : {"rouge_1", "rouge_2", "rouge_l"}) {
      for (const char* part : {"_precision", "_recall", "_f1"}) out.push_back(std::string(prefix) + part);
    }
    return out;
  }
  return {measure_id};
}

namespace detail {

struct TokenizedPair {
  std::vector<text::Token> candidate;
  std::vector<std::vector<text::Token>> references;
  std::vector<TokenSpan> reference_spans;
};

inline TokenizedPair tokenize_pair(const TextPair& pair) {
  TokenizedPair out;
  out.candidate = text::tokenize_text(pair.candidate);
  out.references.reserve(pair.references.size());
  for (const auto& r : pair.references) out.references.push_back(text::tokenize_text(r));
  for (const auto& r : out.references) out.reference_spans.emplace_back(r);
  return out;
}

inline MeasureScore score_one(const std::string& id, const TokenizedPair& p, const MeasureContext& ctx) {
  TokenSpan cand(p.candidate);
  std::span<const TokenSpan> refs(p.reference_spans);
  if (id == "rouge") return rouge_all(cand, refs, ctx.rouge);
  if (id == "bleu") return bleu(cand, refs, ctx.bleu);
  if (id == "meteor") return meteor(cand, refs, ctx.lexicon);
  if (id == "greedy_matching" || id == "cosine_sim") {
    if (ctx.store == nullptr) throw Error(Errc::MissingEmbeddings, id + " needs word vectors");
    if (id == "greedy_matching") return greedy_matching(cand, refs, *ctx.store, ctx.embedding);
    return cosine_sim(cand, refs, *ctx.store);
  }
  throw Error(Errc::UnknownMeasure, id);
}

}  // namespace detail

inline bool is_builtin_measure(const std::string& id) {
  for (const auto& m : builtin_measure_ids()) {
    if (m == id) return true;
  }
  return false;
}

// Scores a batch with one built-in measure. Failures are confined to the
// example that caused them; cider's corpus model spans the examples that
// could be tokenized.
inline std::vector<ScoreOutcome> evaluate_builtin(const std::string& id, std::span<const TextPair> batch,
                                                  const MeasureContext& ctx) {
  if (!is_builtin_measure(id)) throw Error(Errc::UnknownMeasure, id);
  std::vector<ScoreOutcome> out(batch.size());
  if (id == "cider") {
    std::vector<CiderExample> valid;
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      CiderExample ex;
      ex.candidate = text::terms_of(text::tokenize_text(batch[i].candidate), false);
      for (const auto& r : batch[i].references) ex.references.push_back(text::terms_of(text::tokenize_text(r), false));
      bool empty = ex.candidate.empty() || ex.references.empty();
      for (const auto& r : ex.references) empty = empty || r.empty();
      if (empty) {
        out[i].error = std::string(to_string(Errc::EmptyText)) + ": empty candidate or reference";
        continue;
      }
      valid.push_back(std::move(ex));
      where.push_back(i);
    }
    if (!valid.empty()) {
      auto scores = cider(valid);
      for (std::size_t k = 0; k < valid.size(); ++k) out[where[k]].values = std::move(scores[k].values);
    }
    return out;
  }
  if (needs_embeddings(id) && ctx.store == nullptr) {
    throw Error(Errc::MissingEmbeddings, id + " needs word vectors (embeddings.path)");
  }
  for (std::size_t i = 0; i < batch.size(); ++i) {
    try {
      auto pair = detail::tokenize_pair(batch[i]);
      out[i].values = detail::score_one(id, pair, ctx).values;
    } catch (const Error& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

// Resolves a sub-score id ("rouge_1_f1", "bleu", ...) to its measure.
inline std::optional<std::string> measure_of_subscore(const std::string& subscore) {
  for (const auto& id : builtin_measure_ids()) {
    for (const auto& name : builtin_subscores(id)) {
      if (name == subscore) return id;
    }
  }
  return std::nullopt;
}

}  // namespace swb::measures
