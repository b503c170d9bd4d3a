#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "swb/plugin/interface.hpp"

namespace swb::plugin {

namespace detail {

inline void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Runs `fn`, mapping failures onto the protocol's error statuses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const ArgumentError& e) {
    reply(res, 422, {{"errors", e.errors()}});
  } catch (const Error& e) {
    if (e.code() == Errc::ArgumentValidation) {
      reply(res, 422, {{"errors", {e.what()}}});
    } else if (e.code() == Errc::MalformedRecord) {
      reply(res, 400, {{"error", e.what()}});
    } else {
      reply(res, 500, {{"error", e.what()}});
    }
  } catch (const std::exception& e) {
    reply(res, 500, {{"error", e.what()}});
  }
}

inline json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw Error(Errc::MalformedRecord, "body must be a JSON object");
  if (!body.contains("batch") || !body["batch"].is_array()) throw Error(Errc::MalformedRecord, "\"batch\" must be a list");
  return body;
}

inline std::string string_field(const json& item, const char* key, std::size_t pos) {
  if (!item.contains(key) || !item[key].is_string()) {
    throw Error(Errc::MalformedRecord, "batch[" + std::to_string(pos) + "]." + key + " must be a string");
  }
  return item[key].get<std::string>();
}

inline json arguments_field(const json& holder, std::size_t pos) {
  if (!holder.contains("arguments") || holder["arguments"].is_null()) return json::object();
  if (!holder["arguments"].is_object()) {
    throw Error(Errc::MalformedRecord, "batch[" + std::to_string(pos) + "].arguments must be an object");
  }
  return holder["arguments"];
}

inline void mount_common(httplib::Server& srv, const PluginManifest& manifest) {
  json meta = to_json(manifest);
  srv.Get("/health", [](const httplib::Request&, httplib::Response& res) { reply(res, 200, {{"status", "ok"}}); });
  srv.Get("/metadata", [meta](const httplib::Request&, httplib::Response& res) { reply(res, 200, meta); });
}

}  // namespace detail

// Serves a summarizer under the plugin wire contract.
inline void mount(httplib::Server& srv, std::shared_ptr<SummarizerPlugin> plugin) {
  detail::mount_common(srv, plugin->manifest());
  srv.Post("/summarize", [plugin](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] {
      json body = detail::parse_body(req);
      std::vector<SummarizeItem> batch;
      for (std::size_t i = 0; i < body["batch"].size(); ++i) {
        const json& item = body["batch"][i];
        if (!item.is_object()) throw Error(Errc::MalformedRecord, "batch[" + std::to_string(i) + "] must be an object");
        SummarizeItem s;
        s.text = detail::string_field(item, "text", i);
        if (item.contains("title") && !item["title"].is_null()) s.title = detail::string_field(item, "title", i);
        if (!item.contains("ratio") || !item["ratio"].is_number()) {
          throw Error(Errc::MalformedRecord, "batch[" + std::to_string(i) + "].ratio must be a number");
        }
        s.ratio = item["ratio"].get<double>();
        s.arguments = detail::arguments_field(item, i);
        batch.push_back(std::move(s));
      }
      detail::reply(res, 200, {{"summaries", plugin->summarize(batch)}});
    });
  });
}

// Serves a measure. A batch with any failing pair answers 500.
inline void mount(httplib::Server& srv, std::shared_ptr<MeasurePlugin> plugin) {
  detail::mount_common(srv, plugin->manifest());
  srv.Post("/evaluate", [plugin](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] {
      json body = detail::parse_body(req);
      std::vector<measures::TextPair> batch;
      for (std::size_t i = 0; i < body["batch"].size(); ++i) {
        const json& item = body["batch"][i];
        if (!item.is_object()) throw Error(Errc::MalformedRecord, "batch[" + std::to_string(i) + "] must be an object");
        measures::TextPair p;
        p.candidate = detail::string_field(item, "candidate", i);
        if (!item.contains("references") || !item["references"].is_array()) {
          throw Error(Errc::MalformedRecord, "batch[" + std::to_string(i) + "].references must be a list");
        }
        for (const auto& r : item["references"]) {
          if (!r.is_string()) throw Error(Errc::MalformedRecord, "references must be strings");
          p.references.push_back(r.get<std::string>());
        }
        batch.push_back(std::move(p));
      }
      json args = detail::arguments_field(body, 0);
      auto outcomes = plugin->evaluate(batch, args);
      json scores = json::array();
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].ok()) throw Error(Errc::RemoteError, "batch[" + std::to_string(i) + "]: " + *outcomes[i].error);
        scores.push_back(outcomes[i].values);
      }
      detail::reply(res, 200, {{"scores", scores}});
    });
  });
}

}  // namespace swb::plugin
