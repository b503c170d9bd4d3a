#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swb/measures/builtin.hpp"
#include "swb/plugin/manifest.hpp"

namespace swb::plugin {

// One /summarize batch item.
struct SummarizeItem {
  std::string text;
  std::optional<std::string> title;
  double ratio = 0.2;
  json arguments = json::object();
};

class SummarizerPlugin {
 public:
  virtual ~SummarizerPlugin() = default;
  virtual const PluginManifest& manifest() const = 0;
  // One summary per item, in order. Any failing item fails the call.
  virtual std::vector<std::string> summarize(std::span<const SummarizeItem> batch) = 0;
};

class MeasurePlugin {
 public:
  virtual ~MeasurePlugin() = default;
  virtual const PluginManifest& manifest() const = 0;
  // One outcome per pair. Remote implementations throw when the whole call
  // fails; in-process ones report per-pair errors.
  virtual std::vector<measures::ScoreOutcome> evaluate(std::span<const measures::TextPair> batch,
                                                       const json& arguments) = 0;
  // True when scores depend on the whole batch, which must then be sent in
  // one call.
  virtual bool corpus_level() const { return false; }
};

inline void check_ratio(const PluginManifest& m, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ArgumentError({"ratio: " + json(ratio).dump() + " must lie in (0, 1]"});
  }
  if (const ArgumentSpec* spec = m.argument("ratio")) {
    if (auto why = detail::check_value(*spec, ratio); !why.empty()) throw ArgumentError({"ratio: " + why});
  }
}

}  // namespace swb::plugin
