#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swb/error.hpp"
#include "swb/eval/run.hpp"

namespace swb::eval {

namespace fs = std::filesystem;

struct RunSummary {
  std::string id;
  std::string created;
  std::vector<std::string> measures;
  std::vector<std::string> models;
  std::size_t examples = 0;
};

inline EvalRun run_from_json(const json& j, const std::string& examples_text) {
  if (!j.is_object()) throw Error(Errc::CorruptRun, "run.json is not an object");
  if (j.value("version", json()).dump() != "\"1\"") throw Error(Errc::BadVersion, "run.json version must be \"1\"");
  EvalRun run;
  try {
    run.id = j.at("id").get<std::string>();
    run.created = j.value("created", "");
    run.measures = j.at("measures").get<std::vector<std::string>>();
    run.models = j.at("models").get<std::vector<std::string>>();
    for (auto it = j.at("scores").begin(); it != j.at("scores").end(); ++it) {
      run.scores[std::stoull(it.key())] =
          it.value().get<std::map<std::string, std::map<std::string, SubScores>>>();
    }
    run.aggregates = j.at("aggregates").get<std::map<std::string, SubScores>>();
    for (const auto& e : j.at("errors")) {
      run.errors.push_back({e.at("example").get<std::size_t>(), e.at("model").get<std::string>(),
                            e.at("measure").get<std::string>(), e.at("error").get<std::string>()});
    }
    for (const auto& g : j.at("gaps")) run.gaps.emplace_back(g.at("example").get<std::size_t>(), g.at("model").get<std::string>());
    auto ids = j.at("examples").get<std::vector<std::size_t>>();
    std::istringstream lines(examples_text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.empty()) continue;
      json row = json::parse(line);
      EvalExample ex;
      ex.id = row.at("id").get<std::size_t>();
      ex.document = row.at("document").get<std::string>();
      ex.reference = row.at("reference").get<std::string>();
      ex.candidates = row.at("candidates").get<std::map<std::string, std::string>>();
      run.examples.push_back(std::move(ex));
    }
    if (run.examples.size() != ids.size()) throw Error(Errc::CorruptRun, "examples.jsonl does not match run.json");
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (run.examples[i].id != ids[i]) throw Error(Errc::CorruptRun, "examples.jsonl does not match run.json");
    }
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptRun, e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(Errc::CorruptRun, e.what());
  } catch (const std::out_of_range& e) {
    throw Error(Errc::CorruptRun, e.what());
  }
  return run;
}

// Stored aggregates must match the per-example scores to 1e-9.
inline void verify_aggregates(const EvalRun& run) {
  const auto fresh = compute_aggregates(run);
  bool same = fresh.size() == run.aggregates.size();
  for (auto a = fresh.begin(), b = run.aggregates.begin(); same && a != fresh.end(); ++a, ++b) {
    same = a->first == b->first && a->second.size() == b->second.size();
    for (auto x = a->second.begin(), y = b->second.begin(); same && x != a->second.end(); ++x, ++y) {
      same = x->first == y->first && std::fabs(x->second - y->second) <= 1e-9;
    }
  }
  if (!same) throw Error(Errc::CorruptRun, "aggregates do not match the per-example scores");
}

// One directory per run id holding run.json and examples.jsonl.
class RunStore {
 public:
  explicit RunStore(fs::path root) : root_(std::move(root)) {}

  const fs::path& root() const { return root_; }

  void save(const EvalRun& run) const {
    if (!valid_id(run.id)) throw Error(Errc::InvalidConfig, "run id '" + run.id + "' is not storable");
    fs::path dir = root_ / run.id;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
    write_atomic(dir / "examples.jsonl", examples_jsonl(run));
    write_atomic(dir / "run.json", serialize_run(run));
  }

  EvalRun load(const std::string& id) const {
    if (!valid_id(id)) throw Error(Errc::NotFound, "run '" + id + "'");
    fs::path dir = root_ / id;
    if (!fs::exists(dir / "run.json")) throw Error(Errc::NotFound, "run '" + id + "'");
    json j = json::parse(read(dir / "run.json"), nullptr, false);
    if (j.is_discarded()) throw Error(Errc::CorruptRun, "run.json is not valid JSON");
    std::string examples = fs::exists(dir / "examples.jsonl") ? read(dir / "examples.jsonl") : std::string();
    EvalRun run = run_from_json(j, examples);
    if (run.id != id) throw Error(Errc::CorruptRun, "run.json id does not match its directory");
    verify_aggregates(run);
    return run;
  }

  bool exists(const std::string& id) const { return valid_id(id) && fs::exists(root_ / id / "run.json"); }

  // Readable runs, newest first then by id. Unreadable directories are skipped.
  std::vector<RunSummary> list() const {
    std::vector<RunSummary> out;
    std::error_code ec;
    if (!fs::is_directory(root_, ec)) return out;
    for (const auto& entry : fs::directory_iterator(root_, ec)) {
      std::string id = entry.path().filename().string();
      if (!entry.is_directory() || !valid_id(id) || !fs::exists(entry.path() / "run.json")) continue;
      json j = json::parse(read(entry.path() / "run.json"), nullptr, false);
      if (j.is_discarded() || !j.is_object()) continue;
      RunSummary s;
      s.id = id;
      s.created = j.value("created", "");
      s.measures = j.value("measures", std::vector<std::string>{});
      s.models = j.value("models", std::vector<std::string>{});
      s.examples = j.contains("examples") && j["examples"].is_array() ? j["examples"].size() : 0;
      out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const RunSummary& a, const RunSummary& b) {
      return a.created != b.created ? a.created > b.created : a.id < b.id;
    });
    return out;
  }

  static bool valid_id(const std::string& id) {
    return !id.empty() && id.size() <= 64 &&
           std::all_of(id.begin(), id.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'; });
  }

 private:
  static std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  static void write_atomic(const fs::path& target, const std::string& bytes) {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    fs::path tmp = target;
    tmp += ".tmp" + std::to_string(rng());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      if (!out) throw Error(Errc::IoError, "short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
      fs::remove(tmp, ec);
      throw Error(Errc::IoError, "cannot rename into " + target.string());
    }
  }

  fs::path root_;
};

}  // namespace swb::eval
