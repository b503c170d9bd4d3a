#pragma once

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "swb/error.hpp"

namespace swb::service {

struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::filesystem::path runs_dir = "runs";
  std::optional<std::filesystem::path> embeddings_path;
  std::optional<std::filesystem::path> lexicon_path;
  std::vector<std::string> plugins;  // base URLs
  std::string cors_origin;           // empty: no CORS headers
  std::chrono::milliseconds plugin_timeout{120000};
  std::size_t workers = 0;
};

namespace detail {

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

inline int parse_port(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    int port = std::stoi(s, &used);
    if (used == s.size() && port > 0 && port < 65536) return port;
  } catch (const std::exception&) {
  }
  throw Error(Errc::InvalidConfig, where + ": port must be an integer in 1..65535, got '" + s + "'");
}

}  // namespace detail

// Relative paths resolve against `base_dir` (the config file's directory).
inline ServiceConfig parse_config(const std::string& yaml, const std::filesystem::path& base_dir = {}) {
  ServiceConfig cfg;
  YAML::Node root;
  try {
    root = YAML::Load(yaml);
  } catch (const YAML::Exception& e) {
    throw Error(Errc::InvalidConfig, e.what());
  }
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw Error(Errc::InvalidConfig, "config must be a mapping");
  try {
    if (root["host"]) cfg.host = root["host"].as<std::string>();
    if (root["port"]) cfg.port = detail::parse_port(root["port"].as<std::string>(), "port");
    if (root["runs_dir"]) cfg.runs_dir = detail::resolve(base_dir, root["runs_dir"].as<std::string>());
    if (auto e = root["embeddings"]) {
      std::string path = e.IsMap() ? (e["path"] ? e["path"].as<std::string>() : "") : e.as<std::string>();
      if (!path.empty()) cfg.embeddings_path = detail::resolve(base_dir, path);
    }
    if (root["lexicon"]) cfg.lexicon_path = detail::resolve(base_dir, root["lexicon"].as<std::string>());
    if (root["cors_origin"]) cfg.cors_origin = root["cors_origin"].as<std::string>();
    if (root["plugin_timeout_seconds"]) {
      double s = root["plugin_timeout_seconds"].as<double>();
      if (!(s > 0)) throw Error(Errc::InvalidConfig, "plugin_timeout_seconds must be positive");
      cfg.plugin_timeout = std::chrono::milliseconds(static_cast<long long>(s * 1000));
    }
    if (root["workers"]) cfg.workers = root["workers"].as<std::size_t>();
    if (auto p = root["plugins"]) {
      if (!p.IsSequence()) throw Error(Errc::InvalidConfig, "plugins must be a list");
      for (const auto& item : p) {
        if (item.IsMap()) {
          if (!item["url"]) throw Error(Errc::InvalidConfig, "plugin entry needs a url");
          cfg.plugins.push_back(item["url"].as<std::string>());
        } else {
          cfg.plugins.push_back(item.as<std::string>());
        }
      }
    }
  } catch (const YAML::Exception& e) {
    throw Error(Errc::InvalidConfig, e.what());
  }
  return cfg;
}

// Reads `path` (or $SWB_CONFIG when empty), then applies $SWB_PORT.
inline ServiceConfig load_config(std::string path = {}) {
  if (path.empty()) {
    if (const char* env = std::getenv("SWB_CONFIG")) path = env;
  }
  ServiceConfig cfg;
  if (!path.empty()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open config " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    cfg = parse_config(text, std::filesystem::path(path).parent_path());
  }
  if (const char* env = std::getenv("SWB_PORT")) cfg.port = detail::parse_port(env, "SWB_PORT");
  return cfg;
}

}  // namespace swb::service
