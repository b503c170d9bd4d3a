#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "swb/plugin/server.hpp"

namespace swb::fixture {

namespace fs = std::filesystem;
using json = nlohmann::json;

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("swb-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

// An httplib server on an ephemeral localhost port, run on its own thread.
class ServerHost {
 public:
  explicit ServerHost(const std::function<void(httplib::Server&)>& setup) {
    setup(srv_);
    port_ = srv_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { srv_.listen_after_bind(); });
    srv_.wait_until_ready();
  }
  ~ServerHost() { stop(); }
  ServerHost(const ServerHost&) = delete;
  ServerHost& operator=(const ServerHost&) = delete;

  void stop() {
    if (thread_.joinable()) {
      srv_.stop();
      thread_.join();
    }
  }

  int port() const { return port_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  httplib::Server& server() { return srv_; }

 private:
  httplib::Server srv_;
  int port_ = 0;
  std::thread thread_;
};

template <typename Plugin>
std::unique_ptr<ServerHost> host_plugin(std::shared_ptr<Plugin> p) {
  return std::make_unique<ServerHost>([p](httplib::Server& s) { plugin::mount(s, p); });
}

// Nothing listens on port 1 in the test environment.
inline std::string dead_url() { return "http://127.0.0.1:1"; }

// Deterministic generator for the shared fixtures. Draws are raw mt19937_64
// outputs reduced by modulo so every platform produces the same bytes.
class FixtureRng {
 public:
  explicit FixtureRng(std::uint64_t seed) : rng_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  double unit() { return static_cast<double>(rng_() % 2001) / 1000.0 - 1.0; }

 private:
  std::mt19937_64 rng_;
};

inline const std::vector<std::string>& fixture_vocabulary() {
  static const std::vector<std::string> words{
      "cat",    "dog",    "bird",   "river",  "forest", "city",   "market", "price",  "storm",  "rain",
      "sun",    "team",   "match",  "goal",   "player", "court",  "judge",  "law",    "vote",   "council",
      "school", "child",  "teacher", "book",  "music",  "song",   "film",   "actor",  "road",   "bridge",
      "train",  "ship",   "harbor", "field",  "farmer", "crop",   "water",  "energy", "plant",  "report"};
  return words;
}

inline const std::vector<std::string>& fixture_verbs() {
  static const std::vector<std::string> verbs{"sees",    "builds", "crosses", "finds",  "opens",  "closes",
                                              "follows", "raises", "lowers",  "visits", "praises", "leaves"};
  return verbs;
}

// "the <noun> <verb> a <noun> near the <noun>." style sentences.
inline std::string fixture_sentence(FixtureRng& rng) {
  const auto& n = fixture_vocabulary();
  const auto& v = fixture_verbs();
  std::string s = "The " + n[rng.below(n.size())] + " " + v[rng.below(v.size())] + " a " + n[rng.below(n.size())];
  if (rng.below(2) == 0) s += " near the " + n[rng.below(n.size())];
  if (rng.below(3) == 0) s += " in " + std::to_string(1990 + rng.below(30));
  return s + ".";
}

// Word-vector file over the fixture vocabulary plus the function words, dim 8.
inline std::string fixture_vectors(std::uint64_t seed = 7) {
  FixtureRng rng(seed);
  std::vector<std::string> words = fixture_vocabulary();
  for (const auto& v : fixture_verbs()) words.push_back(v);
  std::ostringstream out;
  out << words.size() << " 8\n";
  char buf[32];
  for (const auto& w : words) {
    out << w;
    for (int i = 0; i < 8; ++i) {
      std::snprintf(buf, sizeof buf, " %.3f", rng.unit());
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

// JSONL evaluation dataset: a few-sentence document, one of its sentences
// as reference, and candidates: "lead" is the first sentence, "mixed" is the
// reference with about a third of its words swapped for random nouns, and
// "echo" (every fifth example only) repeats the reference.
inline std::string fixture_dataset(std::size_t examples, std::uint64_t seed = 11) {
  FixtureRng rng(seed);
  std::string out;
  for (std::size_t e = 0; e < examples; ++e) {
    std::vector<std::string> sents;
    std::size_t k = 3 + rng.below(3);
    for (std::size_t i = 0; i < k; ++i) sents.push_back(fixture_sentence(rng));
    std::string document;
    for (const auto& s : sents) document += (document.empty() ? "" : " ") + s;
    std::string reference = sents[rng.below(k)];
    std::string mixed;
    std::istringstream words(reference);
    for (std::string w; words >> w;) {
      if (rng.below(3) == 0) w = fixture_vocabulary()[rng.below(fixture_vocabulary().size())];
      mixed += (mixed.empty() ? "" : " ") + w;
    }
    json row = {{"document", document},
                {"reference", reference},
                {"candidates", {{"lead", sents[0]}, {"mixed", mixed}}}};
    if (e % 5 == 0) row["candidates"]["echo"] = reference;
    out += row.dump() + "\n";
  }
  return out;
}

inline fs::path golden_dir() { return fs::path(SWB_TEST_DATA_DIR) / "golden"; }

}  // namespace swb::fixture
