#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "swb/plugin/client.hpp"
#include "swb/plugin/manifest.hpp"

namespace swb::plugin {

struct ConformanceCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConformanceReport {
  std::string url;
  std::vector<ConformanceCheck> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return !checks.empty();
  }
};

// Black-box checks of the wire contract against a running plugin server.
inline ConformanceReport check_conformance(const std::string& url,
                                           std::chrono::milliseconds timeout = std::chrono::seconds(30)) {
  ConformanceReport report{url, {}};
  auto record = [&](std::string name, const std::function<std::string()>& body) {
    std::string failure;
    try {
      failure = body();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    report.checks.push_back({std::move(name), failure.empty(), failure});
    return failure.empty();
  };

  BaseUrl base = BaseUrl::parse(url);
  httplib::Client cli(base.origin);
  cli.set_connection_timeout(std::chrono::seconds(5));
  cli.set_read_timeout(timeout);
  auto get_json = [&](const std::string& route, int& status) {
    auto res = cli.Get(base.prefix + route);
    if (!res) throw Error(Errc::Timeout, route + ": " + httplib::to_string(res.error()));
    status = res->status;
    return json::parse(res->body, nullptr, false);
  };
  auto post_raw = [&](const std::string& route, const std::string& body, int& status) {
    auto res = cli.Post(base.prefix + route, body, "application/json");
    if (!res) throw Error(Errc::Timeout, route + ": " + httplib::to_string(res.error()));
    status = res->status;
    return json::parse(res->body, nullptr, false);
  };

  record("health", [&]() -> std::string {
    int status = 0;
    json b = get_json("/health", status);
    if (status != 200) return "status " + std::to_string(status);
    if (!b.is_object() || b.value("status", "") != "ok") return "body is not {\"status\":\"ok\"}";
    return {};
  });

  PluginManifest manifest;
  bool have_manifest = record("metadata", [&]() -> std::string {
    int status = 0;
    json b = get_json("/metadata", status);
    if (status != 200) return "status " + std::to_string(status);
    if (b.is_discarded()) return "body is not JSON";
    manifest = manifest_from_json(b);
    if (to_json(manifest) != b) return "metadata has fields outside the manifest schema";
    return {};
  });
  if (!have_manifest) return report;

  ClientOptions opts;
  opts.timeout = timeout;
  auto ep = std::make_shared<RemoteEndpoint>(url, manifest, opts);
  const bool summarizer = manifest.type == PluginType::Summarizer;
  const std::string route = summarizer ? "/summarize" : "/evaluate";

  record("malformed body answers 400", [&]() -> std::string {
    int status = 0;
    json b = post_raw(route, "{not json", status);
    if (status != 400) return "status " + std::to_string(status);
    if (!b.is_object() || !b.contains("error")) return "400 body lacks \"error\"";
    return {};
  });

  record("unknown argument answers 422", [&]() -> std::string {
    json body;
    if (summarizer) {
      body = {{"batch", {{{"text", "One sentence here. Another one there."}, {"ratio", 0.5},
                          {"arguments", {{"__no_such_argument__", 1}}}}}}};
    } else {
      body = {{"batch", {{{"candidate", "a cat"}, {"references", {"a cat"}}}}},
              {"arguments", {{"__no_such_argument__", 1}}}};
    }
    int status = 0;
    json b = post_raw(route, body.dump(), status);
    if (status != 422) return "status " + std::to_string(status);
    if (!b.is_object() || !b.contains("errors") || !b["errors"].is_array()) return "422 body lacks \"errors\" list";
    return {};
  });

  if (summarizer) {
    RemoteSummarizer s(ep);
    record("summaries come back one per item, in order", [&]() -> std::string {
      std::vector<SummarizeItem> batch(2);
      batch[0].text = "The river rose overnight. Farmers moved cattle to higher ground. Roads stayed closed.";
      batch[0].ratio = 0.4;
      batch[1].text = "Markets opened flat. Traders waited for the central bank decision.";
      batch[1].title = "Markets";
      batch[1].ratio = 0.5;
      auto out = s.summarize(batch);
      if (out.size() != 2) return "expected 2 summaries";
      return {};
    });
    record("empty batch yields an empty list", [&]() -> std::string {
      int status = 0;
      json b = post_raw(route, R"({"batch":[]})", status);
      if (status != 200) return "status " + std::to_string(status);
      if (!b.is_object() || b.value("summaries", json()) != json::array()) return "expected {\"summaries\":[]}";
      return {};
    });
  } else {
    RemoteMeasure m(ep);
    record("scores come back one per pair, within the declared range", [&]() -> std::string {
      std::vector<measures::TextPair> batch{{"the cat sat on the mat", {"the cat sat on the mat"}},
                                            {"a dog barked", {"the dog barked loudly"}},
                                            {"rain fell all day", {"it rained all day long"}}};
      try {
        auto out = m.evaluate(batch, json::object());
        if (out.size() != 3) return "expected 3 scores";
        return {};
      } catch (const Error& e) {
        if (e.code() != Errc::RemoteError) throw;
        // A well-formed refusal of one pair (say, out-of-vocabulary text)
        // fails the batch; probe pairs singly and need one to score.
        std::size_t scored = 0;
        for (const auto& pair : batch) {
          try {
            if (m.evaluate(std::span(&pair, 1), json::object()).size() != 1) return "expected 1 score";
            ++scored;
          } catch (const Error& single) {
            if (single.code() != Errc::RemoteError) throw;
          }
        }
        if (scored == 0) return std::string("no probe pair was scored: ") + e.what();
        return {};
      }
    });
    record("empty batch yields an empty list", [&]() -> std::string {
      int status = 0;
      json b = post_raw(route, R"({"batch":[],"arguments":{}})", status);
      if (status != 200) return "status " + std::to_string(status);
      if (!b.is_object() || b.value("scores", json()) != json::array()) return "expected {\"scores\":[]}";
      return {};
    });
  }
  return report;
}

}  // namespace swb::plugin
