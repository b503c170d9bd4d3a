#pragma once

#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "swb/embeddings.hpp"
#include "swb/error.hpp"
#include "swb/eval/dataset.hpp"
#include "swb/eval/export.hpp"
#include "swb/eval/run.hpp"
#include "swb/eval/stats.hpp"
#include "swb/eval/store.hpp"
#include "swb/measures/meteor.hpp"
#include "swb/overlap.hpp"
#include "swb/plugin/registry.hpp"
#include "swb/service/config.hpp"
#include "swb/service/extract.hpp"
#include "swb/summarizers/types.hpp"
#include "swb/text/document.hpp"

namespace swb::service {

using json = nlohmann::json;

// HTTP status for a library error.
inline int status_for(Errc code) {
  switch (code) {
    case Errc::MalformedRecord:
    case Errc::MissingReference:
    case Errc::NoCandidates:
    case Errc::EmptyDataset:
    case Errc::FormatError:
    case Errc::BadType:
    case Errc::MissingField:
      return 400;
    case Errc::NotFound:
      return 404;
    case Errc::FetchError:
    case Errc::Timeout:
    case Errc::RemoteError:
    case Errc::ProtocolError:
      return 502;
    case Errc::CorruptRun:
    case Errc::BadVersion:
    case Errc::IoError:
      return 500;
    default:
      return 422;
  }
}

inline json error_body(const Error& e) {
  json err = {{"code", swb::to_string(e.code())}, {"message", e.what()}};
  if (auto* d = dynamic_cast<const eval::DatasetError*>(&e)) err["line"] = d->line_error().line;
  if (auto* a = dynamic_cast<const plugin::ArgumentError*>(&e)) err["errors"] = a->errors();
  return {{"error", err}};
}

inline json error_entry(const std::exception& e) {
  if (auto* err = dynamic_cast<const Error*>(&e)) return error_body(*err)["error"];
  return {{"code", "InternalError"}, {"message", e.what()}};
}

// Loaded models, registry and run store shared by all requests.
struct Context {
  std::shared_ptr<const plugin::Resources> resources;
  std::shared_ptr<plugin::Registry> registry;
  std::shared_ptr<eval::RunStore> store;
  std::size_t workers = 0;
  std::string cors_origin;
};

inline Context make_context(const ServiceConfig& cfg, std::ostream& log = std::cerr) {
  auto res = std::make_shared<plugin::Resources>();
  if (cfg.embeddings_path) res->store = std::make_shared<VectorStore>(load_vectors(cfg.embeddings_path->string()));
  if (cfg.lexicon_path) {
    res->lexicon = std::make_shared<measures::SynonymLexicon>(measures::SynonymLexicon::load(cfg.lexicon_path->string()));
  }
  Context ctx;
  ctx.resources = res;
  ctx.registry = plugin::Registry::with_builtins(res);
  plugin::ClientOptions opts;
  opts.timeout = cfg.plugin_timeout;
  for (const auto& url : cfg.plugins) {
    try {
      auto ep = ctx.registry->register_remote(url, opts);
      log << "plugin " << ep->manifest().name << " at " << url << ": " << plugin::to_string(ep->health()) << "\n";
    } catch (const std::exception& e) {
      log << "plugin at " << url << " not registered: " << e.what() << "\n";
    }
  }
  ctx.store = std::make_shared<eval::RunStore>(cfg.runs_dir);
  ctx.workers = cfg.workers;
  ctx.cors_origin = cfg.cors_origin;
  return ctx;
}

namespace detail {

inline overlap::OverlapOptions overlap_options(const json& j) {
  overlap::OverlapOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) throw Error(Errc::MalformedRecord, "\"overlap\" must be an object");
  if (j.contains("min_n")) {
    if (!j["min_n"].is_number_integer() || j["min_n"].get<long long>() < 1) {
      throw Error(Errc::InvalidConfig, "overlap.min_n must be an integer >= 1");
    }
    o.min_n = j["min_n"].get<std::size_t>();
  }
  if (j.contains("preserve_duplicates")) o.preserve_duplicates = j["preserve_duplicates"].get<bool>();
  if (j.contains("ignore_stopwords")) o.ignore_stopwords = j["ignore_stopwords"].get<bool>();
  return o;
}

inline summarizers::Budget budget_from_json(const json& j) {
  summarizers::Budget b;
  if (j.is_null()) return b;
  if (!j.is_object() || !j.contains("mode") || !j.contains("value") || !j["mode"].is_string() || !j["value"].is_number()) {
    throw Error(Errc::MalformedRecord, "\"budget\" must be {\"mode\": ratio|sentences|words, \"value\": number}");
  }
  b.mode = summarizers::budget_mode_from_string(j["mode"].get<std::string>());
  b.value = j["value"].get<double>();
  b.validate();
  return b;
}

inline json range_json(const overlap::TokenRange& r, std::span<const text::Token> toks) {
  json j = {{"start", r.start}, {"end", r.end}};
  if (r.end > r.start && r.end <= toks.size()) {
    j["byte_start"] = toks[r.start].char_span.start;
    j["byte_end"] = toks[r.end - 1].char_span.end;
  }
  return j;
}

// Summary tokens (left) against source tokens (right), with byte offsets.
inline json spans_json(const std::string& summary, const std::vector<text::Token>& source,
                       const overlap::OverlapOptions& opts) {
  auto stoks = text::tokenize_text(summary);
  json out = json::array();
  for (const auto& p : overlap::lexical_spans(stoks, source, opts)) {
    json right = json::array();
    for (const auto& r : p.right) right.push_back(range_json(r, source));
    out.push_back({{"group", p.group}, {"length", p.length}, {"summary", range_json(p.left, stoks)}, {"source", right}});
  }
  return out;
}

inline json agreement_json(const std::vector<std::pair<std::string, std::string>>& texts, const std::string& subscore,
                           const plugin::Resources& res) {
  std::vector<std::pair<std::string, std::string>> usable;
  for (const auto& t : texts) {
    if (!text::tokenize_text(t.second).empty()) usable.push_back(t);
  }
  if (usable.size() < 2) return nullptr;
  measures::MeasureContext ctx;
  ctx.store = res.store.get();
  ctx.lexicon = res.lexicon.get();
  auto m = overlap::agreement_matrix(usable, subscore, ctx);
  return {{"models", m.models}, {"matrix", m.matrix}, {"measure", m.measure}};
}

inline json document_json(const text::Document& doc) {
  json sentences = json::array();
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const auto& s = doc.sentences[i];
    sentences.push_back({{"index", s.index},
                         {"text", std::string(doc.sentence_text(i))},
                         {"byte_start", s.char_span.start},
                         {"byte_end", s.char_span.end}});
  }
  return {{"title", doc.title_raw}, {"text", doc.raw}, {"sentences", sentences}};
}

inline json str_or_null(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return nullptr;
  if (!j[key].is_string()) throw Error(Errc::MalformedRecord, std::string("\"") + key + "\" must be a string");
  return j[key];
}

}  // namespace detail

class Service {
 public:
  explicit Service(Context ctx) : ctx_(std::move(ctx)) {}

  const Context& context() const { return ctx_; }

  // POST /api/v1/summarize
  json summarize(const json& req) const {
    if (!req.is_object()) throw Error(Errc::MalformedRecord, "body must be a JSON object");
    json text_field = detail::str_or_null(req, "text");
    json url_field = detail::str_or_null(req, "url");
    if (text_field.is_null() == url_field.is_null()) {
      throw Error(Errc::MalformedRecord, "exactly one of \"text\" and \"url\" is required");
    }
    if (!req.contains("models") || !req["models"].is_array() || req["models"].empty()) {
      throw Error(Errc::MalformedRecord, "\"models\" must be a non-empty list");
    }
    std::vector<std::string> models;
    for (const auto& m : req["models"]) {
      if (!m.is_string()) throw Error(Errc::MalformedRecord, "model ids must be strings");
      if (std::find(models.begin(), models.end(), m.get<std::string>()) == models.end()) models.push_back(m.get<std::string>());
    }
    for (const auto& m : models) ctx_.registry->summarizer(m);  // UnknownModel up front
    auto budget = detail::budget_from_json(req.value("budget", json()));
    auto ov = detail::overlap_options(req.value("overlap", json()));
    json focus = detail::str_or_null(req, "focus");
    json title = detail::str_or_null(req, "title");
    std::string subscore = req.value("agreement_measure", std::string("rouge_1_f1"));
    json arguments = req.value("arguments", json::object());
    if (!arguments.is_object()) throw Error(Errc::MalformedRecord, "\"arguments\" must be an object keyed by model");
    bool has_focus = focus.is_string() && !text::tokenize_text(focus.get<std::string>()).empty();
    if (!has_focus) {
      for (const auto& m : models) {
        const auto* spec = ctx_.registry->summarizer(m)->manifest().argument("focus");
        json a = arguments.value(m, json::object());
        bool given = a.is_object() && a.contains("focus") && a["focus"].is_string() && !a["focus"].get<std::string>().empty();
        if (m == "biased_textrank" && spec && !given) {
          throw Error(Errc::FocusMissing, "biased_textrank requires a focus text");
        }
      }
    }

    std::string raw = text_field.is_string() ? text_field.get<std::string>() : std::string();
    std::optional<std::string> doc_title;
    if (title.is_string()) doc_title = title.get<std::string>();
    if (url_field.is_string()) {
      auto page = fetch_page(url_field.get<std::string>());
      raw = page.text;
      if (!doc_title && !page.title.empty()) doc_title = page.title;
    }
    text::Document doc = make_doc(raw, doc_title);
    auto source_tokens = doc.all_tokens();

    json results = json::array();
    std::vector<std::pair<std::string, std::string>> texts;
    for (const auto& m : models) {
      json entry = {{"model", m}, {"origin", plugin::to_string(*ctx_.registry->origin(m))}};
      try {
        json a = arguments.value(m, json::object());
        if (has_focus && ctx_.registry->summarizer(m)->manifest().argument("focus") && !a.contains("focus")) {
          a["focus"] = focus;
        }
        entry.update(run_model(m, doc, raw, doc_title, budget, a));
        entry["ok"] = true;
        entry["spans"] = detail::spans_json(entry["text"].get<std::string>(), source_tokens, ov);
        texts.emplace_back(m, entry["text"].get<std::string>());
      } catch (const std::exception& e) {
        entry["ok"] = false;
        entry["error"] = error_entry(e);
      }
      results.push_back(std::move(entry));
    }
    return {{"document", detail::document_json(doc)},
            {"results", results},
            {"agreement", detail::agreement_json(texts, subscore, *ctx_.resources)}};
  }

  // One model over a prepared document. Throws on failure.
  json run_model(const std::string& model, const text::Document& doc, const std::string& raw,
                 const std::optional<std::string>& doc_title, const summarizers::Budget& budget,
                 const json& a) const {
    json entry = json::object();
    auto plugin = ctx_.registry->summarizer(model);
    if (auto* b = dynamic_cast<plugin::BuiltinSummarizer*>(plugin.get())) {
      auto r = b->run(doc, budget, a);
      entry["text"] = r.text;
      entry["selected"] = r.selected;
      entry["rank_scores"] = r.rank_scores;
      if (!r.scores.empty()) {
        json fs = json::array();
        for (const auto& s : r.scores) {
          json f = json::object();
          for (const auto& [k, v] : s.features) f[summarizers::to_string(k)] = v;
          fs.push_back({{"index", s.index}, {"features", f}, {"final", s.final_score}});
        }
        entry["feature_scores"] = fs;
      }
    } else {
      if (budget.mode != summarizers::Budget::Mode::Ratio) {
        throw Error(Errc::InvalidConfig, "remote models take ratio budgets only");
      }
      plugin::SummarizeItem item{raw, doc_title, budget.value, a};
      entry["text"] = plugin->summarize(std::span<const plugin::SummarizeItem>(&item, 1)).at(0);
    }
    return entry;
  }

  static text::Document make_doc(const std::string& raw, const std::optional<std::string>& title) {
    try {
      return text::make_document(raw, title);
    } catch (const Error& e) {
      if (e.code() == Errc::EmptyInput) throw Error(Errc::EmptyDocument, "document has no text");
      throw;
    }
  }

  // POST /api/v1/overlap: recompute spans and agreement for given texts.
  json overlap(const json& req) const {
    if (!req.is_object() || !req.contains("source") || !req["source"].is_string() || !req.contains("summaries") ||
        !req["summaries"].is_object()) {
      throw Error(Errc::MalformedRecord, "body must carry \"source\" text and \"summaries\" {model: text}");
    }
    auto ov = detail::overlap_options(req.value("overlap", json()));
    auto source = text::tokenize_text(req["source"].get<std::string>());
    json spans = json::object();
    std::vector<std::pair<std::string, std::string>> texts;
    for (auto it = req["summaries"].begin(); it != req["summaries"].end(); ++it) {
      if (!it.value().is_string()) throw Error(Errc::MalformedRecord, "summaries must be strings");
      spans[it.key()] = detail::spans_json(it.value().get<std::string>(), source, ov);
      texts.emplace_back(it.key(), it.value().get<std::string>());
    }
    std::string subscore = req.value("agreement_measure", std::string("rouge_1_f1"));
    return {{"spans", spans}, {"agreement", detail::agreement_json(texts, subscore, *ctx_.resources)}};
  }

  // Parses, scores and persists a dataset. Shared by the CLI and POST /evaluate.
  eval::EvalRun evaluate(const std::string& dataset, const std::vector<std::string>& measure_ids,
                         const std::map<std::string, json>& arguments = {},
                         eval::ParseMode mode = eval::ParseMode::Strict, bool persist = true,
                         std::vector<eval::LineError>* skipped = nullptr) const {
    for (const auto& m : measure_ids) ctx_.registry->measure(m);  // 422 before parsing
    auto parsed = eval::parse_dataset(dataset, mode);
    if (skipped) *skipped = parsed.errors;
    if (parsed.examples.empty()) throw Error(Errc::EmptyDataset, "no valid records");
    eval::RunOptions opts;
    opts.workers = ctx_.workers;
    opts.arguments = arguments;
    auto run = eval::run_evaluation(parsed.examples, measure_ids, *ctx_.registry, opts);
    if (persist) ctx_.store->save(run);
    return run;
  }

  json plugins(const std::optional<plugin::PluginType>& type, bool include_unhealthy) const {
    json out = json::array();
    for (const auto& e : ctx_.registry->list(type, include_unhealthy)) {
      out.push_back({{"id", e.id},
                     {"origin", plugin::to_string(e.origin)},
                     {"health", plugin::to_string(e.health)},
                     {"manifest", plugin::to_json(e.manifest)}});
    }
    return {{"plugins", out}};
  }

  json runs() const {
    json out = json::array();
    for (const auto& s : ctx_.store->list()) {
      out.push_back({{"id", s.id}, {"created", s.created}, {"measures", s.measures}, {"models", s.models},
                     {"examples", s.examples}});
    }
    return {{"runs", out}};
  }

  json example(const eval::EvalRun& run, std::size_t eid) const {
    const eval::EvalExample* ex = run.example(eid);
    if (ex == nullptr) throw Error(Errc::NotFound, "example " + std::to_string(eid) + " in run " + run.id);
    json scores = json::object();
    if (auto it = run.scores.find(eid); it != run.scores.end()) scores = it->second;
    json errors = json::array();
    for (const auto& e : run.errors) {
      if (e.example == eid) errors.push_back({{"model", e.model}, {"measure", e.measure}, {"error", e.message}});
    }
    return {{"id", ex->id},         {"document", ex->document}, {"reference", ex->reference},
            {"candidates", ex->candidates}, {"scores", scores},  {"errors", errors}};
  }

  void mount(httplib::Server& srv) const {
    const Service* self = this;
    if (!ctx_.cors_origin.empty()) {
      std::string origin = ctx_.cors_origin;
      srv.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Vary", "Origin");
      });
      srv.Options(R"(/api/v1/.*)", [origin](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
      });
    }

    srv.Get("/api/v1/health", [](const httplib::Request&, httplib::Response& res) { send(res, 200, {{"status", "ok"}}); });

    srv.Post("/api/v1/summarize", [self](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { send(res, 200, self->summarize(parse_json(req.body))); });
    });

    srv.Post("/api/v1/overlap", [self](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { send(res, 200, self->overlap(parse_json(req.body))); });
    });

    srv.Post("/api/v1/evaluate", [self](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        std::string dataset;
        std::string measures_csv;
        std::string mode = "strict";
        json args = json::object();
        if (req.is_multipart_form_data()) {
          if (!req.has_file("file")) throw Error(Errc::MalformedRecord, "multipart field \"file\" is required");
          dataset = req.get_file_value("file").content;
          for (const auto& f : req.get_file_values("measures")) {
            measures_csv += (measures_csv.empty() ? "" : ",") + f.content;
          }
          if (req.has_file("mode")) mode = req.get_file_value("mode").content;
          if (req.has_file("arguments")) args = parse_json(req.get_file_value("arguments").content);
        } else {
          json body = parse_json(req.body);
          if (!body.is_object() || !body.contains("dataset") || !body["dataset"].is_string()) {
            throw Error(Errc::MalformedRecord, "expected multipart upload or {\"dataset\": \"...jsonl...\"}");
          }
          dataset = body["dataset"].get<std::string>();
          if (body.contains("measures") && body["measures"].is_array()) {
            for (const auto& m : body["measures"]) measures_csv += (measures_csv.empty() ? "" : ",") + m.get<std::string>();
          }
          mode = body.value("mode", mode);
          args = body.value("arguments", args);
        }
        std::vector<std::string> ids = split_csv(measures_csv);
        if (ids.empty()) throw Error(Errc::InvalidConfig, "no measures requested");
        if (mode != "strict" && mode != "lenient") throw Error(Errc::InvalidConfig, "mode must be strict or lenient");
        std::map<std::string, json> per_measure;
        if (!args.is_object()) throw Error(Errc::MalformedRecord, "\"arguments\" must be an object keyed by measure");
        for (auto it = args.begin(); it != args.end(); ++it) per_measure[it.key()] = it.value();
        auto run = self->evaluate(dataset, ids, per_measure,
                                  mode == "strict" ? eval::ParseMode::Strict : eval::ParseMode::Lenient);
        send(res, 200, {{"run_id", run.id}, {"aggregates", run.aggregates}, {"errors", run.errors.size()}});
      });
    });

    srv.Get("/api/v1/plugins", [self](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        std::optional<plugin::PluginType> type;
        if (req.has_param("type")) {
          type = plugin::plugin_type_from_string(req.get_param_value("type"));
          if (!type) throw Error(Errc::InvalidConfig, "type must be summarizer or measure");
        }
        bool all = req.has_param("include_unhealthy") && req.get_param_value("include_unhealthy") == "true";
        send(res, 200, self->plugins(type, all));
      });
    });

    srv.Get("/api/v1/runs", [self](const httplib::Request&, httplib::Response& res) {
      guarded(res, [&] { send(res, 200, self->runs()); });
    });

    srv.Get(R"(/api/v1/runs/([^/]+))", [self](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { send(res, 200, eval::run_to_json(self->ctx_.store->load(req.matches[1]))); });
    });

    srv.Get(R"(/api/v1/runs/([^/]+)/plot)", [self](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto run = self->ctx_.store->load(req.matches[1]);
        for (const char* p : {"model", "x", "y"}) {
          if (!req.has_param(p)) throw Error(Errc::MalformedRecord, std::string("query parameter '") + p + "' is required");
        }
        std::size_t bins = 10;
        if (req.has_param("bins")) {
          try {
            bins = std::stoul(req.get_param_value("bins"));
          } catch (const std::exception&) {
            throw Error(Errc::InvalidConfig, "bins must be an integer >= 1");
          }
        }
        auto d = eval::plot_data(run, req.get_param_value("model"), req.get_param_value("x"), req.get_param_value("y"), bins);
        send(res, 200, eval::to_json(d));
      });
    });

    srv.Get(R"(/api/v1/runs/([^/]+)/examples/(\d+))", [self](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto run = self->ctx_.store->load(req.matches[1]);
        send(res, 200, self->example(run, std::stoull(req.matches[2])));
      });
    });

    srv.Get(R"(/api/v1/runs/([^/]+)/export)", [self](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto fmt = eval::export_format_from_string(req.has_param("format") ? req.get_param_value("format") : "csv");
        auto run = self->ctx_.store->load(req.matches[1]);
        std::string bytes = eval::export_run(run, fmt);
        res.status = 200;
        res.set_content(bytes, fmt == eval::ExportFormat::Csv ? "text/csv; charset=utf-8" : "application/x-latex");
        res.set_header("Content-Disposition", "attachment; filename=\"" + run.id +
                                                  (fmt == eval::ExportFormat::Csv ? ".csv" : ".tex") + "\"");
      });
    });
  }

  static std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
      std::size_t comma = s.find(',', start);
      if (comma == std::string::npos) comma = s.size();
      std::string item = s.substr(start, comma - start);
      auto a = item.find_first_not_of(" \t\r\n");
      auto b = item.find_last_not_of(" \t\r\n");
      if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
      start = comma + 1;
    }
    return out;
  }

 private:
  static void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static json parse_json(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw Error(Errc::MalformedRecord, "body is not valid JSON");
    return j;
  }

  template <typename Fn>
  static void guarded(httplib::Response& res, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      send(res, status_for(e.code()), error_body(e));
    } catch (const json::exception& e) {
      send(res, 400, {{"error", {{"code", "MalformedRecord"}, {"message", e.what()}}}});
    } catch (const std::exception& e) {
      send(res, 500, {{"error", {{"code", "InternalError"}, {"message", e.what()}}}});
    }
  }

  Context ctx_;
};

}  // namespace swb::service
