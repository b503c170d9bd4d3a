#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swb/error.hpp"
#include "swb/eval/dataset.hpp"
#include "swb/plugin/registry.hpp"

namespace swb::eval {

// subscore -> value
using SubScores = std::map<std::string, double>;

struct CellError {
  std::size_t example = 0;
  std::string model;
  std::string measure;
  std::string message;

  bool operator==(const CellError&) const = default;
  auto operator<=>(const CellError&) const = default;
};

struct EvalRun {
  std::string id;
  std::string created;  // ISO-8601 UTC; not part of the id
  std::vector<std::string> measures;
  std::vector<std::string> models;
  std::vector<EvalExample> examples;
  // example id -> model -> measure -> sub-scores
  std::map<std::size_t, std::map<std::string, std::map<std::string, SubScores>>> scores;
  // model -> sub-score -> mean over the examples where it was scored
  std::map<std::string, SubScores> aggregates;
  std::vector<CellError> errors;
  // (example, model) pairs where the model has no candidate
  std::vector<std::pair<std::size_t, std::string>> gaps;

  bool operator==(const EvalRun&) const = default;

  const EvalExample* example(std::size_t id) const {
    for (const auto& e : examples) {
      if (e.id == id) return &e;
    }
    return nullptr;
  }

  // The value of `subscore` for (example, model), if it was scored.
  std::optional<double> value(std::size_t example_id, const std::string& model, const std::string& subscore) const {
    auto e = scores.find(example_id);
    if (e == scores.end()) return std::nullopt;
    auto m = e->second.find(model);
    if (m == e->second.end()) return std::nullopt;
    for (const auto& [_, subs] : m->second) {
      auto it = subs.find(subscore);
      if (it != subs.end()) return it->second;
    }
    return std::nullopt;
  }

  std::vector<std::string> subscores() const {
    std::set<std::string> names;
    for (const auto& [_, subs] : aggregates) {
      for (const auto& [name, _v] : subs) names.insert(name);
    }
    return {names.begin(), names.end()};
  }
};

// Means over per-example sub-scores, summed in example order.
inline std::map<std::string, SubScores> compute_aggregates(const EvalRun& run) {
  std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> acc;
  for (const auto& [eid, models] : run.scores) {
    for (const auto& [model, measures] : models) {
      for (const auto& [measure, subs] : measures) {
        for (const auto& [name, v] : subs) {
          auto& slot = acc[model][name];
          slot.first += v;
          ++slot.second;
        }
      }
    }
  }
  std::map<std::string, SubScores> out;
  for (const auto& [model, subs] : acc) {
    for (const auto& [name, sum_n] : subs) out[model][name] = sum_n.first / static_cast<double>(sum_n.second);
  }
  return out;
}

// Sub-score key as stored: measure-prefixed unless the plugin already did.
inline std::string qualify_subscore(const std::string& measure, const std::string& key) {
  if (key == measure || key.rfind(measure + "_", 0) == 0) return key;
  return measure + "_" + key;
}

inline json run_to_json(const EvalRun& run, bool with_created = true) {
  json scores = json::object();
  for (const auto& [eid, models] : run.scores) scores[std::to_string(eid)] = models;
  json errors = json::array();
  for (const auto& e : run.errors) {
    errors.push_back({{"example", e.example}, {"model", e.model}, {"measure", e.measure}, {"error", e.message}});
  }
  json gaps = json::array();
  for (const auto& [eid, model] : run.gaps) gaps.push_back({{"example", eid}, {"model", model}});
  json examples = json::array();
  for (const auto& e : run.examples) examples.push_back(e.id);
  json out = {{"version", "1"},        {"id", run.id},         {"measures", run.measures},
              {"models", run.models},  {"examples", examples}, {"scores", scores},
              {"aggregates", run.aggregates}, {"errors", errors}, {"gaps", gaps}};
  if (with_created) out["created"] = run.created;
  return out;
}

inline std::string serialize_run(const EvalRun& run, bool with_created = true) {
  return run_to_json(run, with_created).dump(2) + "\n";
}

inline std::string examples_jsonl(const EvalRun& run) {
  std::string out;
  for (const auto& e : run.examples) {
    json row = {{"id", e.id}, {"document", e.document}, {"reference", e.reference}, {"candidates", e.candidates}};
    out += row.dump() + "\n";
  }
  return out;
}

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Content hash over everything except the id and the creation time.
inline std::string run_fingerprint(const EvalRun& run) {
  EvalRun copy = run;
  copy.id.clear();
  std::uint64_t h = fnv1a(serialize_run(copy, false));
  h = fnv1a(examples_jsonl(copy), h);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunOptions {
  std::size_t workers = 0;      // 0: hardware concurrency
  std::size_t chunk_size = 16;  // pairs per call to non-corpus measures
  std::map<std::string, json> arguments;  // per measure id
  std::function<std::chrono::system_clock::time_point()> now = [] { return std::chrono::system_clock::now(); };
};

namespace detail {

struct Cell {
  std::size_t example;
  std::string model;
};

struct Task {
  std::size_t measure;
  std::string model;
  std::vector<std::size_t> cells;  // indices into the model's cell list
};

}  // namespace detail

// Scores every (example, model, measure) cell. A failing call turns its
// cells into error records; the rest of the run proceeds.
inline EvalRun run_evaluation(const std::vector<EvalExample>& examples, const std::vector<std::string>& measure_ids,
                              const plugin::Registry& registry, const RunOptions& opts = {}) {
  if (examples.empty()) throw Error(Errc::EmptyDataset, "no examples to evaluate");
  if (measure_ids.empty()) throw Error(Errc::InvalidConfig, "no measures requested");

  EvalRun run;
  std::vector<std::shared_ptr<plugin::MeasurePlugin>> plugins;
  for (const auto& id : measure_ids) {
    if (std::find(run.measures.begin(), run.measures.end(), id) != run.measures.end()) continue;
    plugins.push_back(registry.measure(id));  // UnknownMeasure before any work
    run.measures.push_back(id);
  }
  for (const auto& id : run.measures) {
    auto it = opts.arguments.find(id);
    plugin::resolve_arguments(registry.measure(id)->manifest(), it == opts.arguments.end() ? json::object() : it->second);
  }

  run.examples = examples;
  std::sort(run.examples.begin(), run.examples.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::set<std::string> model_set;
  for (const auto& e : run.examples) {
    for (const auto& [m, _] : e.candidates) model_set.insert(m);
  }
  run.models.assign(model_set.begin(), model_set.end());

  // cells per model, in example order
  std::map<std::string, std::vector<detail::Cell>> cells;
  for (const auto& e : run.examples) {
    for (const auto& m : run.models) {
      if (e.candidates.count(m)) {
        cells[m].push_back({e.id, m});
      } else {
        run.gaps.emplace_back(e.id, m);
      }
    }
  }

  std::vector<detail::Task> tasks;
  const std::size_t chunk = std::max<std::size_t>(1, opts.chunk_size);
  for (std::size_t mi = 0; mi < plugins.size(); ++mi) {
    for (const auto& [model, list] : cells) {
      std::size_t step = plugins[mi]->corpus_level() ? list.size() : chunk;
      for (std::size_t start = 0; start < list.size(); start += step) {
        detail::Task t{mi, model, {}};
        for (std::size_t k = start; k < std::min(list.size(), start + step); ++k) t.cells.push_back(k);
        tasks.push_back(std::move(t));
      }
    }
  }

  std::map<std::size_t, const EvalExample*> by_id;
  for (const auto& e : run.examples) by_id[e.id] = &e;

  // results[task][cell] = outcome
  std::vector<std::vector<measures::ScoreOutcome>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t ti = next++; ti < tasks.size(); ti = next++) {
      const detail::Task& t = tasks[ti];
      const auto& list = cells.at(t.model);
      std::vector<measures::TextPair> batch;
      for (std::size_t k : t.cells) {
        const EvalExample& ex = *by_id.at(list[k].example);
        batch.push_back({ex.candidates.at(t.model), {ex.reference}});
      }
      const std::string& mid = run.measures[t.measure];
      auto arg = opts.arguments.find(mid);
      try {
        auto out = plugins[t.measure]->evaluate(batch, arg == opts.arguments.end() ? json::object() : arg->second);
        if (out.size() != batch.size()) throw Error(Errc::ProtocolError, "wrong number of scores");
        results[ti] = std::move(out);
      } catch (const std::exception& e) {
        results[ti].assign(batch.size(), measures::ScoreOutcome{{}, std::string(e.what())});
      }
    }
  };
  std::size_t n_workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min(n_workers, std::max<std::size_t>(1, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    const detail::Task& t = tasks[ti];
    const auto& list = cells.at(t.model);
    const std::string& mid = run.measures[t.measure];
    for (std::size_t j = 0; j < t.cells.size(); ++j) {
      const detail::Cell& c = list[t.cells[j]];
      const measures::ScoreOutcome& o = results[ti][j];
      if (!o.ok()) {
        run.errors.push_back({c.example, c.model, mid, *o.error});
        continue;
      }
      SubScores& dst = run.scores[c.example][c.model][mid];
      for (const auto& [k, v] : o.values) dst[qualify_subscore(mid, k)] = v;
    }
  }
  std::sort(run.errors.begin(), run.errors.end());
  run.aggregates = compute_aggregates(run);
  run.id = run_fingerprint(run);
  run.created = utc_timestamp(opts.now());
  return run;
}

}  // namespace swb::eval
