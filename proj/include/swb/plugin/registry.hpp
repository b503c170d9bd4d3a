#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "swb/plugin/builtin.hpp"
#include "swb/plugin/client.hpp"

namespace swb::plugin {

enum class Origin { Builtin, Remote };

inline std::string to_string(Origin o) { return o == Origin::Builtin ? "builtin" : "remote"; }

struct RegistryEntry {
  std::string id;
  PluginManifest manifest;
  Origin origin = Origin::Builtin;
  Health health = Health::Healthy;
};

// Built-in and remote models/measures behind one lookup. Reads are
// concurrent; registration is serialized.
class Registry {
 public:
  Registry() = default;

  static std::shared_ptr<Registry> with_builtins(std::shared_ptr<const Resources> res = std::make_shared<Resources>()) {
    auto r = std::make_shared<Registry>();
    for (const auto& id : builtin_summarizer_ids()) r->add_builtin(std::make_shared<BuiltinSummarizer>(id, res));
    for (const auto& id : measures::builtin_measure_ids()) r->add_builtin(std::make_shared<BuiltinMeasure>(id, res));
    return r;
  }

  void add_builtin(std::shared_ptr<SummarizerPlugin> p) {
    std::unique_lock lock(mu_);
    claim(p->manifest().name);
    builtins_.push_back({p->manifest().name, p, nullptr, nullptr});
  }

  void add_builtin(std::shared_ptr<MeasurePlugin> p) {
    std::unique_lock lock(mu_);
    claim(p->manifest().name);
    builtins_.push_back({p->manifest().name, nullptr, p, nullptr});
  }

  void add_remote(std::shared_ptr<RemoteEndpoint> ep) {
    std::unique_lock lock(mu_);
    claim(ep->manifest().name);
    Slot s{ep->manifest().name, nullptr, nullptr, ep};
    if (ep->manifest().type == PluginType::Summarizer) {
      s.summarizer = std::make_shared<RemoteSummarizer>(ep);
    } else {
      s.measure = std::make_shared<RemoteMeasure>(ep);
    }
    remotes_.emplace(s.id, std::move(s));
  }

  // Connects to `url`, reads its manifest and registers it.
  std::shared_ptr<RemoteEndpoint> register_remote(const std::string& url, ClientOptions opts = {}) {
    auto ep = RemoteEndpoint::connect(url, std::move(opts));
    add_remote(ep);
    return ep;
  }

  // Builtins in registration order, then remotes by name.
  std::vector<RegistryEntry> list(std::optional<PluginType> type = std::nullopt, bool include_unhealthy = false) const {
    std::vector<std::pair<std::string, std::shared_ptr<RemoteEndpoint>>> remote_eps;
    std::vector<RegistryEntry> out;
    {
      std::shared_lock lock(mu_);
      for (const auto& s : builtins_) {
        const PluginManifest& m = s.manifest();
        if (!type || m.type == *type) out.push_back({s.id, m, Origin::Builtin, Health::Healthy});
      }
      for (const auto& [id, s] : remotes_) remote_eps.emplace_back(id, s.endpoint);
    }
    // health probes run outside the lock
    for (const auto& [id, ep] : remote_eps) {
      const PluginManifest& m = ep->manifest();
      if (type && m.type != *type) continue;
      Health h = ep->refresh_health();
      if (h != Health::Healthy && !include_unhealthy) continue;
      out.push_back({id, m, Origin::Remote, h});
    }
    return out;
  }

  std::shared_ptr<SummarizerPlugin> summarizer(const std::string& id) const {
    std::shared_lock lock(mu_);
    const Slot* s = find(id);
    if (s == nullptr || !s->summarizer) throw Error(Errc::UnknownModel, unknown(id, PluginType::Summarizer));
    return s->summarizer;
  }

  std::shared_ptr<MeasurePlugin> measure(const std::string& id) const {
    std::shared_lock lock(mu_);
    const Slot* s = find(id);
    if (s == nullptr || !s->measure) throw Error(Errc::UnknownMeasure, unknown(id, PluginType::Measure));
    return s->measure;
  }

  bool has(const std::string& id, PluginType type) const {
    std::shared_lock lock(mu_);
    const Slot* s = find(id);
    return s != nullptr && (type == PluginType::Summarizer ? s->summarizer != nullptr : s->measure != nullptr);
  }

  std::optional<Origin> origin(const std::string& id) const {
    std::shared_lock lock(mu_);
    if (remotes_.count(id)) return Origin::Remote;
    if (find(id)) return Origin::Builtin;
    return std::nullopt;
  }

  std::vector<std::string> ids(PluginType type) const {
    std::shared_lock lock(mu_);
    std::vector<std::string> out;
    for (const auto& s : builtins_) {
      if (s.manifest().type == type) out.push_back(s.id);
    }
    for (const auto& [id, s] : remotes_) {
      if (s.manifest().type == type) out.push_back(id);
    }
    return out;
  }

 private:
  struct Slot {
    std::string id;
    std::shared_ptr<SummarizerPlugin> summarizer;
    std::shared_ptr<MeasurePlugin> measure;
    std::shared_ptr<RemoteEndpoint> endpoint;

    const PluginManifest& manifest() const { return summarizer ? summarizer->manifest() : measure->manifest(); }
  };

  void claim(const std::string& id) {
    if (id.empty()) throw Error(Errc::MissingField, "name");
    if (find(id)) throw Error(Errc::DuplicateName, "'" + id + "' is already registered");
  }

  const Slot* find(const std::string& id) const {
    for (const auto& s : builtins_) {
      if (s.id == id) return &s;
    }
    auto it = remotes_.find(id);
    return it == remotes_.end() ? nullptr : &it->second;
  }

  std::string unknown(const std::string& id, PluginType type) const {
    std::string known;
    for (const auto& s : builtins_) {
      if (s.manifest().type == type) known += (known.empty() ? "" : ", ") + s.id;
    }
    for (const auto& [rid, s] : remotes_) {
      if (s.manifest().type == type) known += (known.empty() ? "" : ", ") + rid;
    }
    return "'" + id + "' (known: " + known + ")";
  }

  mutable std::shared_mutex mu_;
  std::vector<Slot> builtins_;
  std::map<std::string, Slot> remotes_;
};

}  // namespace swb::plugin
