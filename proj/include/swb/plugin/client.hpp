#pragma once

#include <chrono>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "swb/error.hpp"
#include "swb/plugin/interface.hpp"
#include "swb/plugin/manifest.hpp"

namespace swb::plugin {

enum class Health { Unknown, Healthy, Unreachable };

inline std::string to_string(Health h) {
  switch (h) {
    case Health::Unknown: return "unknown";
    case Health::Healthy: return "healthy";
    case Health::Unreachable: return "unreachable";
  }
  return "unknown";
}

using Clock = std::chrono::steady_clock;

struct ClientOptions {
  std::chrono::milliseconds timeout{120000};
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds cooldown{30000};
  std::size_t max_in_flight = 4;
  std::function<Clock::time_point()> now = [] { return Clock::now(); };
};

// "http://host:port/prefix" split into what httplib::Client wants and the
// path prefix every route is appended to.
struct BaseUrl {
  std::string origin;
  std::string prefix;

  static BaseUrl parse(const std::string& url) {
    auto scheme = url.find("://");
    if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0) {
      throw Error(Errc::InvalidConfig, "plugin URL must start with http://, got '" + url + "'");
    }
    auto slash = url.find('/', scheme + 3);
    BaseUrl b;
    b.origin = url.substr(0, slash);
    if (slash != std::string::npos) b.prefix = url.substr(slash);
    while (!b.prefix.empty() && b.prefix.back() == '/') b.prefix.pop_back();
    return b;
  }
};

// A remote plugin server. Thread-safe; each call opens its own connection.
class RemoteEndpoint {
 public:
  RemoteEndpoint(std::string base_url, PluginManifest manifest, ClientOptions opts = {})
      : url_(std::move(base_url)), base_(BaseUrl::parse(url_)), manifest_(std::move(manifest)), opts_(std::move(opts)) {}

  // Fetches /metadata, then runs the registration health check.
  static std::shared_ptr<RemoteEndpoint> connect(const std::string& base_url, ClientOptions opts = {}) {
    BaseUrl base = BaseUrl::parse(base_url);
    auto cli = make_client(base, opts);
    auto res = cli->Get(base.prefix + "/metadata");
    if (!res) throw Error(Errc::Timeout, base_url + "/metadata: " + httplib::to_string(res.error()));
    if (res->status != 200) {
      throw Error(Errc::ProtocolError, base_url + "/metadata answered " + std::to_string(res->status));
    }
    json body = json::parse(res->body, nullptr, false);
    if (body.is_discarded()) throw Error(Errc::ProtocolError, base_url + "/metadata is not JSON");
    auto ep = std::make_shared<RemoteEndpoint>(base_url, manifest_from_json(body), std::move(opts));
    ep->check_health();
    return ep;
  }

  const std::string& url() const { return url_; }
  const PluginManifest& manifest() const { return manifest_; }
  const ClientOptions& options() const { return opts_; }

  Health health() const {
    std::lock_guard lock(state_mu_);
    return health_;
  }

  std::optional<Clock::time_point> last_checked() const {
    std::lock_guard lock(state_mu_);
    return last_checked_;
  }

  Health check_health() {
    auto cli = make_client(base_, opts_);
    auto res = cli->Get(base_.prefix + "/health");
    bool ok = false;
    if (res && res->status == 200) {
      json body = json::parse(res->body, nullptr, false);
      ok = body.is_object() && body.value("status", "") == "ok";
    }
    std::lock_guard lock(state_mu_);
    health_ = ok ? Health::Healthy : Health::Unreachable;
    last_checked_ = opts_.now();
    return health_;
  }

  // Re-checks an unreachable or never-checked endpoint once the cooldown
  // since the last check has passed.
  Health refresh_health() {
    {
      std::lock_guard lock(state_mu_);
      if (health_ == Health::Healthy) return health_;
      if (last_checked_ && opts_.now() - *last_checked_ < opts_.cooldown) return health_;
    }
    return check_health();
  }

  // POSTs `body` to `route`; transport failures mark the endpoint unreachable.
  json post(const std::string& route, const json& body) {
    if (refresh_health() != Health::Healthy) {
      throw Error(Errc::Timeout, url_ + " is unreachable");
    }
    Slot slot(*this);
    auto cli = make_client(base_, opts_);
    auto res = cli->Post(base_.prefix + route, body.dump(), "application/json");
    if (!res) {
      mark_unreachable();
      throw Error(Errc::Timeout, url_ + route + ": " + httplib::to_string(res.error()));
    }
    json reply = json::parse(res->body, nullptr, false);
    if (res->status == 422) {
      std::vector<std::string> errors;
      if (!reply.is_discarded() && reply.contains("errors") && reply["errors"].is_array()) {
        for (const auto& e : reply["errors"]) errors.push_back(e.is_string() ? e.get<std::string>() : e.dump());
      }
      if (errors.empty()) errors.push_back("rejected by plugin");
      throw ArgumentError(std::move(errors));
    }
    if (res->status == 500 || res->status == 400) {
      std::string msg = !reply.is_discarded() && reply.is_object() && reply.contains("error") && reply["error"].is_string()
                            ? reply["error"].get<std::string>()
                            : res->body;
      throw Error(Errc::RemoteError, std::to_string(res->status) + " " + msg);
    }
    if (res->status != 200) throw Error(Errc::ProtocolError, "unexpected status " + std::to_string(res->status));
    if (reply.is_discarded() || !reply.is_object()) throw Error(Errc::ProtocolError, "response body is not a JSON object");
    return reply;
  }

  std::size_t in_flight() const {
    std::lock_guard lock(slot_mu_);
    return in_flight_;
  }

 private:
  // Bounded in-flight requests per endpoint.
  class Slot {
   public:
    explicit Slot(RemoteEndpoint& ep) : ep_(ep) {
      std::unique_lock lock(ep_.slot_mu_);
      ep_.slot_cv_.wait(lock, [&] { return ep_.in_flight_ < ep_.opts_.max_in_flight; });
      ++ep_.in_flight_;
    }
    ~Slot() {
      {
        std::lock_guard lock(ep_.slot_mu_);
        --ep_.in_flight_;
      }
      ep_.slot_cv_.notify_one();
    }
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;

   private:
    RemoteEndpoint& ep_;
  };

  static std::unique_ptr<httplib::Client> make_client(const BaseUrl& base, const ClientOptions& opts) {
    auto cli = std::make_unique<httplib::Client>(base.origin);
    cli->set_connection_timeout(opts.connect_timeout);
    cli->set_read_timeout(opts.timeout);
    cli->set_write_timeout(opts.timeout);
    return cli;
  }

  void mark_unreachable() {
    std::lock_guard lock(state_mu_);
    health_ = Health::Unreachable;
    last_checked_ = opts_.now();
  }

  std::string url_;
  BaseUrl base_;
  PluginManifest manifest_;
  ClientOptions opts_;

  mutable std::mutex state_mu_;
  Health health_ = Health::Unknown;
  std::optional<Clock::time_point> last_checked_;

  mutable std::mutex slot_mu_;
  std::condition_variable slot_cv_;
  std::size_t in_flight_ = 0;
};

class RemoteSummarizer : public SummarizerPlugin {
 public:
  explicit RemoteSummarizer(std::shared_ptr<RemoteEndpoint> ep) : ep_(std::move(ep)) {
    if (ep_->manifest().type != PluginType::Summarizer) {
      throw Error(Errc::BadType, ep_->manifest().name + " is not a summarizer");
    }
  }

  const PluginManifest& manifest() const override { return ep_->manifest(); }
  const std::shared_ptr<RemoteEndpoint>& endpoint() const { return ep_; }

  std::vector<std::string> summarize(std::span<const SummarizeItem> batch) override {
    if (batch.empty()) return {};
    json items = json::array();
    for (const SummarizeItem& item : batch) {
      check_ratio(manifest(), item.ratio);
      json j = {{"text", item.text}, {"ratio", item.ratio}, {"arguments", resolve_arguments(manifest(), item.arguments)}};
      if (item.title) j["title"] = *item.title;
      items.push_back(std::move(j));
    }
    json reply = ep_->post("/summarize", {{"batch", std::move(items)}});
    if (!reply.contains("summaries") || !reply["summaries"].is_array()) {
      throw Error(Errc::ProtocolError, "missing \"summaries\" list");
    }
    const json& s = reply["summaries"];
    if (s.size() != batch.size()) {
      throw Error(Errc::ProtocolError, "expected " + std::to_string(batch.size()) + " summaries, got " +
                                           std::to_string(s.size()));
    }
    std::vector<std::string> out;
    out.reserve(s.size());
    for (const auto& x : s) {
      if (!x.is_string()) throw Error(Errc::ProtocolError, "summary is not a string");
      out.push_back(x.get<std::string>());
    }
    return out;
  }

 private:
  std::shared_ptr<RemoteEndpoint> ep_;
};

class RemoteMeasure : public MeasurePlugin {
 public:
  explicit RemoteMeasure(std::shared_ptr<RemoteEndpoint> ep) : ep_(std::move(ep)) {
    if (ep_->manifest().type != PluginType::Measure) {
      throw Error(Errc::BadType, ep_->manifest().name + " is not a measure");
    }
  }

  const PluginManifest& manifest() const override { return ep_->manifest(); }
  bool corpus_level() const override { return ep_->manifest().corpus_level; }
  const std::shared_ptr<RemoteEndpoint>& endpoint() const { return ep_; }

  std::vector<measures::ScoreOutcome> evaluate(std::span<const measures::TextPair> batch,
                                               const json& arguments) override {
    if (batch.empty()) return {};
    json args = resolve_arguments(manifest(), arguments);
    json items = json::array();
    for (const auto& p : batch) items.push_back({{"candidate", p.candidate}, {"references", p.references}});
    json reply = ep_->post("/evaluate", {{"batch", std::move(items)}, {"arguments", std::move(args)}});
    if (!reply.contains("scores") || !reply["scores"].is_array()) {
      throw Error(Errc::ProtocolError, "missing \"scores\" list");
    }
    const json& scores = reply["scores"];
    if (scores.size() != batch.size()) {
      throw Error(Errc::ProtocolError, "expected " + std::to_string(batch.size()) + " scores, got " +
                                           std::to_string(scores.size()));
    }
    const ScoreRange& range = manifest().score_range;
    std::vector<measures::ScoreOutcome> out(batch.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (!scores[i].is_object() || scores[i].empty()) throw Error(Errc::ProtocolError, "score entry is not an object");
      for (auto it = scores[i].begin(); it != scores[i].end(); ++it) {
        if (!it.value().is_number()) throw Error(Errc::ProtocolError, it.key() + " is not a number");
        double v = it.value().get<double>();
        if (!range.contains(v)) {
          throw Error(Errc::ProtocolError, it.key() + " = " + it.value().dump() + " outside the declared range [" +
                                               json(range.lo).dump() + ", " + json(range.hi).dump() + "]");
        }
        out[i].values[it.key()] = v;
      }
    }
    return out;
  }

 private:
  std::shared_ptr<RemoteEndpoint> ep_;
};

}  // namespace swb::plugin
