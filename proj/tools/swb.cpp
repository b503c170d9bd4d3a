// swb: command line front end over the same code paths as the HTTP service.

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "swb/swb.hpp"

namespace {

using swb::Errc;
using swb::Error;
using json = nlohmann::json;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kUsage = 2;

int exit_code(const Error& e) {
  switch (e.code()) {
    case Errc::ArgumentValidation:
    case Errc::BadArgumentSpec:
      return kInvalid;
    default:
      return kUsage;
  }
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << bytes;
}

struct Globals {
  std::string config;
  std::string embeddings;
  std::string lexicon;
  std::string runs_dir;
  std::size_t workers = 0;
};

swb::service::ServiceConfig effective_config(const Globals& g) {
  auto cfg = swb::service::load_config(g.config);
  if (!g.embeddings.empty()) cfg.embeddings_path = g.embeddings;
  if (!g.lexicon.empty()) cfg.lexicon_path = g.lexicon;
  if (!g.runs_dir.empty()) cfg.runs_dir = g.runs_dir;
  if (g.workers) cfg.workers = g.workers;
  return cfg;
}

// Plain aligned table of the aggregates, for a terminal.
std::string aggregate_table(const swb::eval::EvalRun& run) {
  auto cols = run.subscores();
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"model"});
  for (const auto& c : cols) rows[0].push_back(c);
  for (const auto& [model, subs] : run.aggregates) {
    std::vector<std::string> r{model};
    for (const auto& c : cols) {
      auto it = subs.find(c);
      r.push_back(it == subs.end() ? "--" : swb::eval::format_value(it->second));
    }
    rows.push_back(std::move(r));
  }
  std::vector<std::size_t> width(cols.size() + 1, 0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << "  ";
      if (i == 0) out << std::left << std::setw(static_cast<int>(width[i])) << r[i];
      else out << std::right << std::setw(static_cast<int>(width[i])) << r[i];
    }
    out << "\n";
  }
  return out.str();
}

int cmd_summarize(const Globals& g, const std::string& model, std::optional<double> ratio,
                  std::optional<double> sentences, std::optional<double> words, const std::string& focus,
                  const std::string& title, const std::string& file) {
  swb::summarizers::Budget budget;
  if (sentences) budget = {swb::summarizers::Budget::Mode::Sentences, *sentences};
  else if (words) budget = {swb::summarizers::Budget::Mode::Words, *words};
  else if (ratio) budget = {swb::summarizers::Budget::Mode::Ratio, *ratio};
  budget.validate();

  swb::service::Service svc(swb::service::make_context(effective_config(g)));
  svc.context().registry->summarizer(model);
  std::string raw = read_input(file);
  std::optional<std::string> doc_title;
  if (!title.empty()) doc_title = title;
  auto doc = swb::service::Service::make_doc(raw, doc_title);
  json args = json::object();
  if (!focus.empty()) {
    if (!svc.context().registry->summarizer(model)->manifest().argument("focus")) {
      std::cerr << "warning: " << model << " takes no focus; ignored\n";
    } else {
      args["focus"] = focus;
    }
  }
  auto entry = svc.run_model(model, doc, raw, doc_title, budget, args);
  std::cout << entry["text"].get<std::string>() << "\n";
  return kOk;
}

int cmd_evaluate(const Globals& g, const std::string& measures, const std::string& input, const std::string& format,
                 const std::string& out, const std::string& mode, const std::string& arguments, bool no_save) {
  auto ids = swb::service::Service::split_csv(measures);
  if (ids.empty()) throw Error(Errc::InvalidConfig, "no measures given");
  std::map<std::string, json> per_measure;
  if (!arguments.empty()) {
    json a = json::parse(arguments, nullptr, false);
    if (a.is_discarded() || !a.is_object()) throw Error(Errc::InvalidConfig, "--arguments must be a JSON object keyed by measure");
    for (auto it = a.begin(); it != a.end(); ++it) per_measure[it.key()] = it.value();
  }
  std::optional<swb::eval::ExportFormat> fmt;
  if (!format.empty()) fmt = swb::eval::export_format_from_string(format);

  swb::service::Service svc(swb::service::make_context(effective_config(g)));
  std::string data = read_input(input);
  std::vector<swb::eval::LineError> skipped;
  auto run = svc.evaluate(data, ids, per_measure,
                          mode == "lenient" ? swb::eval::ParseMode::Lenient : swb::eval::ParseMode::Strict, !no_save,
                          &skipped);
  for (const auto& e : skipped) std::cerr << "skipped " << e.str() << "\n";
  for (const auto& e : run.errors) {
    std::cerr << "example " << e.example << " " << e.model << "/" << e.measure << ": " << e.message << "\n";
  }
  std::cerr << "run " << run.id << (no_save ? "" : " saved under " + svc.context().store->root().string()) << "\n";
  write_output(out, fmt ? swb::eval::export_run(run, *fmt) : aggregate_table(run));
  return kOk;
}

int cmd_plugins_list(const Globals& g, const std::string& type, bool all) {
  std::optional<swb::plugin::PluginType> t;
  if (!type.empty()) {
    t = swb::plugin::plugin_type_from_string(type);
    if (!t) throw Error(Errc::InvalidConfig, "--type must be summarizer or measure");
  }
  swb::service::Service svc(swb::service::make_context(effective_config(g)));
  auto entries = svc.context().registry->list(t, all);
  std::size_t w = 2;
  for (const auto& e : entries) w = std::max(w, e.id.size());
  for (const auto& e : entries) {
    std::cout << std::left << std::setw(static_cast<int>(w)) << e.id << "  " << std::setw(10)
              << swb::plugin::to_string(e.manifest.type) << "  " << std::setw(7) << swb::plugin::to_string(e.origin)
              << "  " << std::setw(11) << swb::plugin::to_string(e.health) << "  " << e.manifest.version << "\n";
  }
  return kOk;
}

int cmd_plugins_validate(const std::string& path) {
  try {
    auto m = swb::plugin::load_manifest(path);
    std::cout << "valid: " << m.name << " " << swb::plugin::to_string(m.type) << " " << m.version << "\n";
    return kOk;
  } catch (const swb::plugin::ManifestError& e) {
    for (const auto& v : e.violations()) std::cout << v.str() << "\n";
    return kInvalid;
  }
}

int cmd_plugins_check(const std::string& url, int timeout) {
  auto report = swb::plugin::check_conformance(url, std::chrono::seconds(timeout));
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) std::cout << ": " << c.detail;
    std::cout << "\n";
  }
  return report.passed() ? kOk : kInvalid;
}

int cmd_serve(const Globals& g) {
  // signals go to the waiter thread only
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  auto cfg = effective_config(g);
  swb::service::Service svc(swb::service::make_context(cfg));
  httplib::Server srv;
  svc.mount(srv);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    std::cerr << "stopping\n";
    srv.stop();
  });
  std::cerr << "listening on " << cfg.host << ":" << cfg.port << "\n";
  bool ok = srv.listen(cfg.host, cfg.port);
  if (!ok) {
    std::cerr << "cannot listen on " << cfg.host << ":" << cfg.port << "\n";
    pthread_kill(waiter.native_handle(), SIGTERM);
  }
  waiter.join();
  return ok ? kOk : kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"summary workbench: summarizers, measures and evaluation runs"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "YAML config (default: $SWB_CONFIG)");
  app.add_option("--embeddings", g.embeddings, "word-vector text file");
  app.add_option("--lexicon", g.lexicon, "synonym lexicon file");
  app.add_option("--runs-dir", g.runs_dir, "where evaluation runs are stored");
  app.add_option("--workers", g.workers, "evaluation worker threads (0: hardware)");

  auto* sum = app.add_subcommand("summarize", "summarize a text file or stdin");
  std::string model, focus, title, file = "-";
  std::optional<double> ratio, sentences, words;
  sum->add_option("--model,-m", model, "model id")->required();
  auto* r = sum->add_option("--ratio", ratio, "fraction of sentences");
  auto* s = sum->add_option("--sentences", sentences, "number of sentences");
  auto* w = sum->add_option("--words", words, "word cap");
  r->excludes(s)->excludes(w);
  s->excludes(w);
  sum->add_option("--focus", focus, "focus text for guided models");
  sum->add_option("--title", title, "document title");
  sum->add_option("file", file, "input file, - for stdin");

  auto* ev = app.add_subcommand("evaluate", "score a JSONL dataset");
  std::string measures, input, format, out, mode = "strict", arguments;
  bool no_save = false;
  ev->add_option("--measures", measures, "comma separated measure ids")->required();
  ev->add_option("--input,-i", input, "JSONL dataset, - for stdin")->required();
  ev->add_option("--export", format, "csv or latex")->check(CLI::IsMember({"csv", "latex"}));
  ev->add_option("--out,-o", out, "output path (default stdout)");
  ev->add_option("--mode", mode, "strict or lenient")->check(CLI::IsMember({"strict", "lenient"}));
  ev->add_option("--arguments", arguments, "JSON object of per-measure arguments");
  ev->add_flag("--no-save", no_save, "do not persist the run");

  auto* pl = app.add_subcommand("plugins", "list, validate or check plugins");
  pl->require_subcommand(1);
  auto* pl_list = pl->add_subcommand("list", "registered plugins");
  std::string type;
  bool all = false;
  pl_list->add_option("--type", type, "summarizer or measure");
  pl_list->add_flag("--all", all, "include unhealthy endpoints");
  auto* pl_val = pl->add_subcommand("validate", "validate a manifest file");
  std::string manifest;
  pl_val->add_option("manifest", manifest)->required();
  auto* pl_chk = pl->add_subcommand("check", "run the conformance suite against an endpoint");
  std::string url;
  int timeout = 30;
  pl_chk->add_option("url", url)->required();
  pl_chk->add_option("--timeout", timeout, "seconds per request");

  app.add_subcommand("serve", "run the HTTP service until interrupted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (sum->parsed()) return cmd_summarize(g, model, ratio, sentences, words, focus, title, file);
    if (ev->parsed()) return cmd_evaluate(g, measures, input, format, out, mode, arguments, no_save);
    if (pl_list->parsed()) return cmd_plugins_list(g, type, all);
    if (pl_val->parsed()) return cmd_plugins_validate(manifest);
    if (pl_chk->parsed()) return cmd_plugins_check(url, timeout);
    return cmd_serve(g);
  } catch (const swb::eval::DatasetError& e) {
    std::cerr << e.line_error().str() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
