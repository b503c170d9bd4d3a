#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swb/embeddings.hpp"
#include "swb/measures/builtin.hpp"
#include "swb/plugin/interface.hpp"
#include "swb/summarizers/cluster.hpp"
#include "swb/summarizers/featuresum.hpp"
#include "swb/summarizers/textrank.hpp"
#include "swb/text/document.hpp"

namespace swb::plugin {

// Shared, read-only model resources. Either pointer may be null.
struct Resources {
  std::shared_ptr<const VectorStore> store;
  std::shared_ptr<const measures::SynonymLexicon> lexicon;
};

inline const std::vector<std::string>& builtin_summarizer_ids() {
  static const std::vector<std::string> ids{"featuresum", "textrank",        "positionrank",
                                            "topicrank",  "biased_textrank", "clustersum"};
  return ids;
}

namespace detail {

inline json arg(const char* name, const char* kind, json def, std::optional<double> lo = std::nullopt,
                std::optional<double> hi = std::nullopt) {
  json a = {{"name", name}, {"kind", kind}, {"default", std::move(def)}};
  if (lo) a["min"] = *lo;
  if (hi) a["max"] = *hi;
  return a;
}

inline json summarizer_manifest_json(const std::string& id) {
  json args = json::array();
  std::string citation;
  if (id == "featuresum") {
    citation = "Edmundson, 1969; feature-product sentence scoring";
    for (summarizers::Feature f : summarizers::kAllFeatures) args.push_back(arg(summarizers::to_string(f).c_str(), "bool", true));
    args.push_back(arg("epsilon", "float", 0.001, 0.0, 0.1));
  } else if (id == "clustersum") {
    citation = "k-means over mean-pooled sentence embeddings";
    args.push_back(arg("seed", "int", 0, 0.0));
  } else {
    citation = id == "biased_textrank" ? "Kazemi et al., 2020" : "Mihalcea and Tarau, 2004";
    args.push_back(arg("damping", "float", 0.85, 0.0, 1.0));
    args.push_back(arg("max_iter", "int", 100, 1.0));
    args.push_back(arg("tol", "float", 1e-6, 0.0));
    if (id == "biased_textrank") args.push_back(arg("focus", "string", ""));
  }
  return {{"name", id},         {"type", "summarizer"},   {"version", "1.0.0"},
          {"source", "builtin"}, {"citation", citation}, {"arguments", args}};
}

inline json measure_manifest_json(const std::string& id) {
  json args = json::array();
  std::string citation;
  json range = nullptr;
  if (id == "rouge") {
    citation = "Lin, 2004";
    args.push_back(arg("use_stems", "bool", false));
  } else if (id == "bleu") {
    citation = "Papineni et al., 2002";
    args.push_back(arg("smoothing", "bool", false));
  } else if (id == "meteor") {
    citation = "Banerjee and Lavie, 2005";
  } else if (id == "cider") {
    citation = "Vedantam et al., 2015";
    range = {0.0, 10.0};
  } else if (id == "greedy_matching") {
    citation = "Rus and Lintean, 2012";
    args.push_back(arg("include_stopwords", "bool", false));
    range = {-1.0, 1.0};
  } else {
    citation = "cosine of mean-pooled word vectors";
    range = {-1.0, 1.0};
  }
  json m = {{"name", id},         {"type", "measure"},      {"version", "1.0.0"},
            {"source", "builtin"}, {"citation", citation}, {"arguments", args}};
  if (!range.is_null()) m["score_range"] = range;
  if (id == "cider") m["corpus_level"] = true;
  return m;
}

}  // namespace detail

// In-process summarizer: the same code path as calling the module API.
class BuiltinSummarizer : public SummarizerPlugin {
 public:
  BuiltinSummarizer(std::string id, std::shared_ptr<const Resources> res)
      : id_(std::move(id)), res_(std::move(res)), manifest_(manifest_from_json(detail::summarizer_manifest_json(id_))) {}

  const PluginManifest& manifest() const override { return manifest_; }
  const std::string& id() const { return id_; }

  // Full result for one document, with arguments resolved against the manifest.
  summarizers::SummaryResult run(const text::Document& doc, const summarizers::Budget& budget,
                                 const json& arguments) const {
    json a = resolve_arguments(manifest_, arguments);
    if (id_ == "featuresum") {
      summarizers::FeatureConfig cfg;
      cfg.enabled.clear();
      for (summarizers::Feature f : summarizers::kAllFeatures) {
        if (a[summarizers::to_string(f)].get<bool>()) cfg.enabled.insert(f);
      }
      cfg.epsilon = a["epsilon"].get<double>();
      cfg.validate();
      return summarizers::featuresum_summarize(doc, cfg, budget);
    }
    if (id_ == "clustersum") {
      if (!res_ || !res_->store) throw Error(Errc::MissingEmbeddings, "clustersum needs word vectors");
      return summarizers::cluster_summarize(doc, *res_->store, budget, a["seed"].get<std::uint64_t>());
    }
    summarizers::RankConfig cfg;
    if (id_ == "textrank") cfg.variant = summarizers::RankVariant::Plain;
    else if (id_ == "positionrank") cfg.variant = summarizers::RankVariant::Position;
    else if (id_ == "topicrank") cfg.variant = summarizers::RankVariant::Topic;
    else cfg.variant = summarizers::RankVariant::Biased;
    cfg.damping = a["damping"].get<double>();
    cfg.max_iter = a["max_iter"].get<std::size_t>();
    cfg.tol = a["tol"].get<double>();
    if (a.contains("focus") && !a["focus"].get<std::string>().empty()) cfg.focus = a["focus"].get<std::string>();
    return summarizers::textrank_summarize(doc, cfg, budget, res_ ? res_->store.get() : nullptr);
  }

  std::vector<std::string> summarize(std::span<const SummarizeItem> batch) override {
    std::vector<std::string> out;
    out.reserve(batch.size());
    for (const SummarizeItem& item : batch) {
      check_ratio(manifest_, item.ratio);
      auto doc = text::make_document(item.text, item.title);
      out.push_back(run(doc, summarizers::Budget::ratio(item.ratio), item.arguments).text);
    }
    return out;
  }

 private:
  std::string id_;
  std::shared_ptr<const Resources> res_;
  PluginManifest manifest_;
};

class BuiltinMeasure : public MeasurePlugin {
 public:
  BuiltinMeasure(std::string id, std::shared_ptr<const Resources> res)
      : id_(std::move(id)), res_(std::move(res)), manifest_(manifest_from_json(detail::measure_manifest_json(id_))) {}

  const PluginManifest& manifest() const override { return manifest_; }
  const std::string& id() const { return id_; }

  measures::MeasureContext context(const json& arguments) const {
    json a = resolve_arguments(manifest_, arguments);
    measures::MeasureContext ctx;
    if (res_) {
      ctx.store = res_->store.get();
      ctx.lexicon = res_->lexicon.get();
    }
    if (a.contains("use_stems")) ctx.rouge.use_stems = a["use_stems"].get<bool>();
    if (a.contains("smoothing")) ctx.bleu.smoothing = a["smoothing"].get<bool>();
    if (a.contains("include_stopwords")) ctx.embedding.include_stopwords = a["include_stopwords"].get<bool>();
    return ctx;
  }

  std::vector<measures::ScoreOutcome> evaluate(std::span<const measures::TextPair> batch,
                                               const json& arguments) override {
    if (batch.empty()) return {};
    return measures::evaluate_builtin(id_, batch, context(arguments));
  }

  bool corpus_level() const override { return id_ == "cider"; }

 private:
  std::string id_;
  std::shared_ptr<const Resources> res_;
  PluginManifest manifest_;
};

}  // namespace swb::plugin
