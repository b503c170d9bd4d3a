#include <gtest/gtest.h>

#include <atomic>

#include "../support.hpp"
#include "swb/plugin/conformance.hpp"
#include "swb/plugin/registry.hpp"

using namespace swb;
using namespace swb::plugin;
using fixture::ServerHost;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::IoError;
}

const char* kManifest = R"(
name: lead
type: summarizer
version: 0.3.1
source: https://example.org/lead
arguments:
  - name: keep_title
    kind: bool
    default: false
  - name: mode
    kind: categorical
    choices: [first, last]
    default: first
  - name: limit
    kind: int
    min: 1
    max: 10
    default: 3
)";

// Measure reporting a fixed value for every pair.
class FixedMeasure : public MeasurePlugin {
 public:
  FixedMeasure(double value, double hi = 1.0) : value_(value) {
    manifest_ = manifest_from_json(
        {{"name", "fixed"}, {"type", "measure"}, {"version", "1.0.0"}, {"score_range", {0.0, hi}}});
  }
  const PluginManifest& manifest() const override { return manifest_; }
  std::vector<measures::ScoreOutcome> evaluate(std::span<const measures::TextPair> batch, const json&) override {
    calls++;
    std::vector<measures::ScoreOutcome> out(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (batch[i].candidate == "fail") out[i].error = "cannot score";
      else out[i].values["fixed"] = value_;
    }
    return out;
  }
  std::atomic<int> calls{0};

 private:
  double value_;
  PluginManifest manifest_;
};

// Wraps a summarizer and counts the calls that reach it.
class CountingSummarizer : public SummarizerPlugin {
 public:
  explicit CountingSummarizer(std::shared_ptr<SummarizerPlugin> inner) : inner_(std::move(inner)) {}
  const PluginManifest& manifest() const override { return inner_->manifest(); }
  std::vector<std::string> summarize(std::span<const SummarizeItem> batch) override {
    calls++;
    return inner_->summarize(batch);
  }
  std::atomic<int> calls{0};

 private:
  std::shared_ptr<SummarizerPlugin> inner_;
};

std::vector<SummarizeItem> two_items() {
  std::vector<SummarizeItem> batch(2);
  batch[0].text = "The river rose overnight. Farmers moved cattle to higher ground. Roads stayed closed for days.";
  batch[0].ratio = 0.4;
  batch[1].text = "Markets opened flat. Traders waited for the bank. Prices rose late in the day.";
  batch[1].title = "Markets";
  batch[1].ratio = 0.5;
  return batch;
}

}  // namespace

TEST(Manifest, ParsesYaml) {
  auto m = parse_manifest(kManifest);
  EXPECT_EQ(m.name, "lead");
  EXPECT_EQ(m.type, PluginType::Summarizer);
  EXPECT_EQ(m.version, "0.3.1");
  ASSERT_EQ(m.arguments.size(), 3u);
  EXPECT_EQ(m.arguments[1].kind, ArgKind::Categorical);
  EXPECT_EQ(m.arguments[1].choices, (std::vector<std::string>{"first", "last"}));
  EXPECT_EQ(m.arguments[2].max, 10.0);
}

TEST(Manifest, CollectsEveryViolation) {
  try {
    parse_manifest("type: summarizer\nsource: x\n");
    FAIL();
  } catch (const ManifestError& e) {
    std::vector<std::string> got;
    for (const auto& v : e.violations()) got.push_back(v.str());
    EXPECT_EQ(got, (std::vector<std::string>{"MissingField: name", "MissingField: version"}));
    EXPECT_EQ(e.code(), Errc::MissingField);
  }
}

TEST(Manifest, RejectsBadFields) {
  EXPECT_EQ(code_of([] { parse_manifest("name: a\ntype: ranker\nversion: 1.0.0\n"); }), Errc::BadType);
  EXPECT_EQ(code_of([] { parse_manifest("name: a\ntype: measure\nversion: one\n"); }), Errc::BadType);
  EXPECT_EQ(code_of([] {
              parse_manifest("name: a\ntype: measure\nversion: 1.0.0\narguments:\n  - name: k\n    kind: int\n"
                             "    default: 20\n    max: 10\n");
            }),
            Errc::BadArgumentSpec);
  EXPECT_EQ(code_of([] {
              parse_manifest("name: a\ntype: measure\nversion: 1.0.0\narguments:\n  - name: k\n    kind: bool\n"
                             "    default: true\n  - name: k\n    kind: bool\n    default: true\n");
            }),
            Errc::BadArgumentSpec);
  EXPECT_EQ(code_of([] { parse_manifest("name: [unclosed"); }), Errc::FormatError);
  EXPECT_EQ(code_of([] { parse_manifest("name: a\ntype: measure\nversion: 1.0.0\ncorpus_level: sometimes\n"); }),
            Errc::BadType);
}

TEST(Manifest, YamlAndJsonRoundTrip) {
  auto m = parse_manifest(kManifest);
  EXPECT_EQ(parse_manifest(to_yaml(m)), m);
  EXPECT_EQ(manifest_from_json(to_json(m)), m);
  for (const auto& id : builtin_summarizer_ids()) {
    BuiltinSummarizer s(id, nullptr);
    EXPECT_EQ(parse_manifest(to_yaml(s.manifest())), s.manifest()) << id;
  }
  for (const auto& id : measures::builtin_measure_ids()) {
    BuiltinMeasure m(id, nullptr);
    EXPECT_EQ(parse_manifest(to_yaml(m.manifest())), m.manifest()) << id;
    EXPECT_EQ(m.manifest().corpus_level, m.corpus_level()) << id;
  }
}

TEST(Manifest, ResolveArguments) {
  auto m = parse_manifest(kManifest);
  auto a = resolve_arguments(m, json::object());
  EXPECT_EQ(a["limit"], 3);
  EXPECT_EQ(a["mode"], "first");
  auto b = resolve_arguments(m, {{"limit", 7}, {"mode", "last"}});
  EXPECT_EQ(b["limit"], 7);
  try {
    resolve_arguments(m, {{"limit", 11}, {"mode", "middle"}, {"bogus", 1}});
    FAIL();
  } catch (const ArgumentError& e) {
    EXPECT_EQ(e.errors().size(), 3u);
  }
}

TEST(RemotePlugin, SummariesMatchInProcess) {
  auto local = std::make_shared<BuiltinSummarizer>("textrank", nullptr);
  auto host = fixture::host_plugin(std::shared_ptr<SummarizerPlugin>(local));
  auto ep = RemoteEndpoint::connect(host->url());
  EXPECT_EQ(ep->health(), Health::Healthy);
  EXPECT_EQ(ep->manifest(), local->manifest());
  RemoteSummarizer remote(ep);
  auto batch = two_items();
  EXPECT_EQ(remote.summarize(batch), local->summarize(batch));
  EXPECT_TRUE(remote.summarize({}).empty());
}

TEST(RemotePlugin, InvalidArgumentsRejectedBeforeTheNetwork) {
  auto counting = std::make_shared<CountingSummarizer>(std::make_shared<BuiltinSummarizer>("textrank", nullptr));
  auto host = fixture::host_plugin(std::shared_ptr<SummarizerPlugin>(counting));
  RemoteSummarizer remote(RemoteEndpoint::connect(host->url()));
  auto batch = two_items();
  batch[0].ratio = 0.0;
  EXPECT_EQ(code_of([&] { remote.summarize(batch); }), Errc::ArgumentValidation);
  batch = two_items();
  batch[1].arguments = {{"damping", 2.0}};
  EXPECT_EQ(code_of([&] { remote.summarize(batch); }), Errc::ArgumentValidation);
  EXPECT_EQ(counting->calls.load(), 0);
  remote.summarize(two_items());
  EXPECT_EQ(counting->calls.load(), 1);
}

TEST(RemotePlugin, ServerAnswersProtocolStatuses) {
  auto host = fixture::host_plugin(std::shared_ptr<SummarizerPlugin>(std::make_shared<BuiltinSummarizer>("textrank", nullptr)));
  httplib::Client cli(host->url());
  auto bad = cli.Post("/summarize", "{oops", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  EXPECT_TRUE(json::parse(bad->body).contains("error"));
  auto unknown = cli.Post("/summarize",
                          R"({"batch":[{"text":"A cat. A dog.","ratio":0.5,"arguments":{"nope":1}}]})",
                          "application/json");
  ASSERT_TRUE(unknown);
  EXPECT_EQ(unknown->status, 422);
  EXPECT_TRUE(json::parse(unknown->body)["errors"].is_array());
  auto empty = cli.Post("/summarize", R"({"batch":[]})", "application/json");
  ASSERT_TRUE(empty);
  EXPECT_EQ(empty->status, 200);
  EXPECT_EQ(json::parse(empty->body), json({{"summaries", json::array()}}));
  auto health = cli.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(json::parse(health->body), json({{"status", "ok"}}));
}

TEST(RemotePlugin, OutOfRangeScoreIsProtocolError) {
  auto host = fixture::host_plugin(std::shared_ptr<MeasurePlugin>(std::make_shared<FixedMeasure>(1.5)));
  RemoteMeasure remote(RemoteEndpoint::connect(host->url()));
  std::vector<measures::TextPair> batch{{"a b", {"a b"}}};
  EXPECT_EQ(code_of([&] { remote.evaluate(batch, json::object()); }), Errc::ProtocolError);
}

TEST(RemotePlugin, DeclaredRangeWidensAcceptance) {
  auto host = fixture::host_plugin(std::shared_ptr<MeasurePlugin>(std::make_shared<FixedMeasure>(7.0, 10.0)));
  RemoteMeasure remote(RemoteEndpoint::connect(host->url()));
  std::vector<measures::TextPair> batch{{"a b", {"a b"}}, {"c", {"d"}}};
  auto out = remote.evaluate(batch, json::object());
  ASSERT_EQ(out.size(), 2u);
  EXPECT_DOUBLE_EQ(out[1].values.at("fixed"), 7.0);
}

TEST(RemotePlugin, FailingPairFailsTheBatch) {
  auto host = fixture::host_plugin(std::shared_ptr<MeasurePlugin>(std::make_shared<FixedMeasure>(0.5)));
  RemoteMeasure remote(RemoteEndpoint::connect(host->url()));
  std::vector<measures::TextPair> batch{{"ok", {"x"}}, {"fail", {"x"}}};
  EXPECT_EQ(code_of([&] { remote.evaluate(batch, json::object()); }), Errc::RemoteError);
}

TEST(RemotePlugin, DeadEndpointTimesOutAndCoolsDown) {
  auto now = std::make_shared<Clock::time_point>(Clock::now());
  ClientOptions opts;
  opts.connect_timeout = std::chrono::milliseconds(500);
  opts.now = [now] { return *now; };
  auto ep = std::make_shared<RemoteEndpoint>(fixture::dead_url(),
                                             BuiltinSummarizer("textrank", nullptr).manifest(), opts);
  RemoteSummarizer remote(ep);
  EXPECT_EQ(code_of([&] { remote.summarize(two_items()); }), Errc::Timeout);
  EXPECT_EQ(ep->health(), Health::Unreachable);
  auto checked = ep->last_checked();
  *now += std::chrono::seconds(10);
  EXPECT_EQ(code_of([&] { remote.summarize(two_items()); }), Errc::Timeout);
  EXPECT_EQ(ep->last_checked(), checked);  // still inside the cooldown, no probe
  *now += std::chrono::seconds(30);
  ep->refresh_health();
  EXPECT_NE(ep->last_checked(), checked);
  EXPECT_EQ(code_of([] { RemoteEndpoint::connect(fixture::dead_url()); }), Errc::Timeout);
}

TEST(RemotePlugin, RecoversAfterCooldown) {
  auto now = std::make_shared<Clock::time_point>(Clock::now());
  auto down = std::make_shared<std::atomic<bool>>(false);
  ClientOptions opts;
  opts.now = [now] { return *now; };
  ServerHost host([down](httplib::Server& s) {
    s.set_pre_routing_handler([down](const httplib::Request&, httplib::Response& r) {
      if (!*down) return httplib::Server::HandlerResponse::Unhandled;
      r.status = 503;
      return httplib::Server::HandlerResponse::Handled;
    });
    mount(s, std::shared_ptr<SummarizerPlugin>(std::make_shared<BuiltinSummarizer>("textrank", nullptr)));
  });
  auto ep = RemoteEndpoint::connect(host.url(), opts);
  *down = true;
  EXPECT_EQ(ep->check_health(), Health::Unreachable);
  RemoteSummarizer remote(ep);
  *down = false;
  EXPECT_EQ(code_of([&] { remote.summarize(two_items()); }), Errc::Timeout);
  *now += opts.cooldown;
  EXPECT_EQ(remote.summarize(two_items()).size(), 2u);
  EXPECT_EQ(ep->health(), Health::Healthy);
}

TEST(Registry, BuiltinsInOrderAndDuplicatesRejected) {
  auto reg = Registry::with_builtins();
  std::vector<std::string> ids;
  for (const auto& e : reg->list(PluginType::Summarizer)) ids.push_back(e.id);
  EXPECT_EQ(ids, builtin_summarizer_ids());
  ids.clear();
  for (const auto& e : reg->list(PluginType::Measure)) ids.push_back(e.id);
  EXPECT_EQ(ids, measures::builtin_measure_ids());
  EXPECT_EQ(code_of([&] { reg->add_builtin(std::make_shared<BuiltinMeasure>("rouge", nullptr)); }),
            Errc::DuplicateName);
  EXPECT_EQ(code_of([&] { reg->summarizer("nope"); }), Errc::UnknownModel);
  EXPECT_EQ(code_of([&] { reg->measure("textrank"); }), Errc::UnknownMeasure);
  EXPECT_EQ(reg->origin("rouge"), Origin::Builtin);
}

TEST(Registry, RemotesListedAfterBuiltinsAndHiddenWhenDown) {
  auto reg = Registry::with_builtins();
  auto host = fixture::host_plugin(std::shared_ptr<MeasurePlugin>(std::make_shared<FixedMeasure>(0.5)));
  ClientOptions opts;
  opts.connect_timeout = std::chrono::milliseconds(500);
  reg->register_remote(host->url(), opts);
  auto all = reg->list(PluginType::Measure);
  EXPECT_EQ(all.back().id, "fixed");
  EXPECT_EQ(all.back().origin, Origin::Remote);
  EXPECT_EQ(reg->origin("fixed"), Origin::Remote);
  EXPECT_EQ(code_of([&] { reg->register_remote(host->url(), opts); }), Errc::DuplicateName);
  host->stop();
  std::vector<measures::TextPair> batch{{"a", {"a"}}};
  EXPECT_EQ(code_of([&] { reg->measure("fixed")->evaluate(batch, json::object()); }), Errc::Timeout);
  EXPECT_NE(reg->list(PluginType::Measure).back().id, "fixed");
  auto with_down = reg->list(PluginType::Measure, true);
  EXPECT_EQ(with_down.back().id, "fixed");
  EXPECT_EQ(with_down.back().health, Health::Unreachable);
}

TEST(Conformance, BuiltinsPassOverHttp) {
  auto res = std::make_shared<Resources>();
  for (const char* id : {"textrank", "featuresum"}) {
    auto host = fixture::host_plugin(std::shared_ptr<SummarizerPlugin>(std::make_shared<BuiltinSummarizer>(id, res)));
    auto report = check_conformance(host->url());
    for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << id << " " << c.name << ": " << c.detail;
    EXPECT_TRUE(report.passed());
  }
  for (const char* id : {"rouge", "bleu", "meteor", "cider"}) {
    auto host = fixture::host_plugin(std::shared_ptr<MeasurePlugin>(std::make_shared<BuiltinMeasure>(id, res)));
    auto report = check_conformance(host->url());
    for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << id << " " << c.name << ": " << c.detail;
  }
}

TEST(Conformance, EmbeddingMeasureWithSmallVocabularyPasses) {
  auto res = std::make_shared<Resources>();
  res->store = std::make_shared<VectorStore>(VectorStore::parse(std::string_view("dog 1 0\ncat 0 1\n")));
  for (const char* id : {"greedy_matching", "cosine_sim"}) {
    auto host = fixture::host_plugin(std::shared_ptr<MeasurePlugin>(std::make_shared<BuiltinMeasure>(id, res)));
    auto report = check_conformance(host->url());
    for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << id << " " << c.name << ": " << c.detail;
  }
  // nothing in the probe is embeddable
  res->store = std::make_shared<VectorStore>(VectorStore::parse(std::string_view("zebra 1 0\n")));
  auto host = fixture::host_plugin(
      std::shared_ptr<MeasurePlugin>(std::make_shared<BuiltinMeasure>("greedy_matching", res)));
  EXPECT_FALSE(check_conformance(host->url()).passed());
}

TEST(Conformance, CorpusLevelTravelsWithTheManifest) {
  auto host = fixture::host_plugin(std::shared_ptr<MeasurePlugin>(std::make_shared<BuiltinMeasure>("cider", nullptr)));
  RemoteMeasure cider(RemoteEndpoint::connect(host->url()));
  EXPECT_TRUE(cider.corpus_level());
  auto rouge_host =
      fixture::host_plugin(std::shared_ptr<MeasurePlugin>(std::make_shared<BuiltinMeasure>("rouge", nullptr)));
  EXPECT_FALSE(RemoteMeasure(RemoteEndpoint::connect(rouge_host->url())).corpus_level());
}

TEST(Conformance, BrokenServersFail) {
  ServerHost sick([](httplib::Server& s) {
    s.Get("/health", [](const httplib::Request&, httplib::Response& r) { r.status = 503; });
    s.Get("/metadata", [](const httplib::Request&, httplib::Response& r) {
      r.set_content(R"({"name":"x","type":"measure","version":"1.0.0","extra":true})", "application/json");
    });
  });
  auto report = check_conformance(sick.url(), std::chrono::seconds(2));
  EXPECT_FALSE(report.passed());
  ASSERT_GE(report.checks.size(), 2u);
  EXPECT_FALSE(report.checks[0].passed);
  EXPECT_FALSE(report.checks[1].passed);
  EXPECT_FALSE(check_conformance(fixture::dead_url(), std::chrono::seconds(1)).passed());
}
