#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "../support.hpp"
#include "swb/summarizers/cluster.hpp"
#include "swb/summarizers/featuresum.hpp"
#include "swb/summarizers/textrank.hpp"

using namespace swb;
using namespace swb::summarizers;

namespace {

std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

Matrix to_matrix(const std::vector<std::vector<double>>& w) {
  Matrix m(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = w[i][j];
  }
  return m;
}

std::vector<std::vector<double>> random_graph(std::mt19937& rng, std::size_t n) {
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng() % 3 == 0) continue;  // leave some edges (and whole rows) out
      w[i][j] = w[j][i] = u(rng);
    }
  }
  return w;
}

std::string random_document(std::mt19937& rng, std::size_t sentences) {
  fixture::FixtureRng f(rng());
  std::string doc;
  for (std::size_t i = 0; i < sentences; ++i) doc += (doc.empty() ? "" : " ") + fixture::fixture_sentence(f);
  return doc;
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::IoError;
}

}  // namespace

TEST(PageRank, SymmetricSmallGraphs) {
  RankConfig cfg;
  auto two = pagerank(to_matrix({{0, 1}, {1, 0}}), uniform(2), cfg);
  EXPECT_NEAR(two.scores[0], 0.5, 1e-6);
  EXPECT_NEAR(two.scores[1], 0.5, 1e-6);
  auto three = pagerank(to_matrix({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}), uniform(3), cfg);
  for (double p : three.scores) EXPECT_NEAR(p, 1.0 / 3.0, 1e-6);
}

TEST(PageRank, ChainMiddleWins) {
  auto r = pagerank(to_matrix({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}), uniform(3), RankConfig{});
  auto exact = oracle::pagerank_exact({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}, uniform(3), 0.85);
  EXPECT_GT(r.scores[1], r.scores[0]);
  EXPECT_NEAR(r.scores[0], r.scores[2], 1e-9);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.scores[i], exact[i], 1e-5);
}

TEST(PageRank, BadTeleport) {
  Matrix m(2, 1.0);
  std::vector<double> neg{1.5, -0.5}, short_t{1.0};
  EXPECT_EQ(code_of([&] { pagerank(m, neg, RankConfig{}); }), Errc::BadTeleport);
  EXPECT_EQ(code_of([&] { pagerank(m, short_t, RankConfig{}); }), Errc::BadTeleport);
}

TEST(PageRank, RandomGraphsMatchLinearSolve) {
  std::mt19937 rng(99);
  for (int g = 0; g < 200; ++g) {
    std::size_t n = 1 + rng() % 20;
    auto w = random_graph(rng, n);
    std::vector<double> t(n);
    double total = 0;
    for (auto& x : t) total += (x = 0.1 + (rng() % 100) / 100.0);
    for (auto& x : t) x /= total;
    RankConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_iter = 1000;
    auto r = pagerank(to_matrix(w), t, cfg);
    auto exact = oracle::pagerank_exact(w, t, cfg.damping);
    for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(r.scores[i], exact[i], 1e-8);
  }
}

TEST(FeatureSum, PositionSpotValues) {
  auto doc = text::make_document("Alpha beta. Gamma delta. Epsilon zeta. Eta theta.");
  FeatureConfig cfg;
  cfg.enabled = {Feature::Position};
  auto s = featuresum_features(doc, cfg);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_DOUBLE_EQ(s[0].features.at(Feature::Position), 1.0);
  EXPECT_DOUBLE_EQ(s[3].features.at(Feature::Position), 0.25);
}

TEST(FeatureSum, IsolatedSentenceHasZeroConnectivity) {
  auto doc = text::make_document("The river floods the valley. Quantum chess puzzles. The valley river rises.");
  auto s = featuresum_features(doc, FeatureConfig{});
  EXPECT_DOUBLE_EQ(s[1].features.at(Feature::Connectivity), 0.0);
  EXPECT_GT(s[0].features.at(Feature::Connectivity), 0.0);
  // the product floors the zero at epsilon
  double product = 1.0;
  for (const auto& [f, v] : s[1].features) product *= std::max(v, 0.001);
  EXPECT_DOUBLE_EQ(s[1].final_score, product);
}

TEST(FeatureSum, SingleSentence) {
  auto doc = text::make_document("Only one sentence here.");
  auto r = featuresum_summarize(doc, FeatureConfig{}, Budget::ratio(0.5));
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0}));
  EXPECT_GT(r.scores[0].final_score, 0.0);
}

TEST(FeatureSum, TitleOverlapDropsWithoutTitle) {
  auto doc = text::make_document("A cat sat. A dog ran.");
  auto s = featuresum_features(doc, FeatureConfig{});
  EXPECT_EQ(s[0].features.count(Feature::TitleOverlap), 0u);
  auto titled = text::make_document("A cat sat. A dog ran.", std::string("Cats"));
  EXPECT_EQ(featuresum_features(titled, FeatureConfig{})[0].features.count(Feature::TitleOverlap), 1u);
}

TEST(FeatureSum, EqualScoresTieBreakByPosition) {
  std::string raw;
  for (int i = 0; i < 10; ++i) raw += "Same words here. ";
  auto doc = text::make_document(raw);
  FeatureConfig cfg;
  cfg.enabled = {Feature::NonstopRatio, Feature::RelLength};
  auto r = featuresum_summarize(doc, cfg, Budget::ratio(0.2));
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 1}));
}

TEST(FeatureSum, ToggleExactnessOnRandomDocuments) {
  std::mt19937 rng(5);
  for (int round = 0; round < 100; ++round) {
    auto doc = text::make_document(random_document(rng, 2 + rng() % 6), std::string("The river report"));
    auto full = featuresum_features(doc, FeatureConfig{});
    FeatureConfig reduced;
    reduced.enabled.clear();
    for (Feature f : kAllFeatures) {
      if (rng() % 2) reduced.enabled.insert(f);
    }
    if (reduced.enabled.empty()) reduced.enabled.insert(Feature::Position);
    auto part = featuresum_features(doc, reduced);
    for (std::size_t i = 0; i < full.size(); ++i) {
      double product = 1.0;
      for (Feature f : reduced.enabled) product *= std::max(full[i].features.at(f), reduced.epsilon);
      ASSERT_DOUBLE_EQ(part[i].final_score, product);
      for (const auto& [f, _] : part[i].features) ASSERT_TRUE(reduced.enabled.count(f));
    }
  }
}

TEST(FeatureSum, ScalingOneFeaturePreservesOrder) {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(0.01, 1.0), c(0.1, 10.0);
  std::set<Feature> all(std::begin(kAllFeatures), std::end(kAllFeatures));
  for (int round = 0; round < 300; ++round) {
    std::size_t n = 2 + rng() % 8;
    std::vector<std::map<Feature, double>> values(n);
    for (auto& v : values) {
      for (Feature f : all) v[f] = u(rng);
    }
    Feature scaled = kAllFeatures[rng() % 7];
    double k = c(rng);
    std::vector<double> before, after;
    for (auto v : values) {
      before.push_back(combine_features(v, all, 0.001));
      v[scaled] *= k;
      after.push_back(combine_features(v, all, 0.001));
    }
    ASSERT_EQ(rank_by_score(before), rank_by_score(after));
  }
}

TEST(Budget, WordsTakesLongestFittingPrefix) {
  std::mt19937 rng(7);
  for (int round = 0; round < 100; ++round) {
    auto doc = text::make_document(random_document(rng, 3 + rng() % 5));
    std::size_t w = 1 + rng() % 30;
    auto r = featuresum_summarize(doc, FeatureConfig{}, Budget::words(w));
    std::vector<double> finals;
    for (const auto& s : r.scores) finals.push_back(s.final_score);
    auto ranking = rank_by_score(finals);
    // brute force over ranked prefixes
    std::size_t best = 1;
    for (std::size_t len = 1; len <= ranking.size(); ++len) {
      std::size_t words = 0;
      for (std::size_t k = 0; k < len; ++k) words += doc.sentences[ranking[k]].word_count();
      if (words <= w) best = len;
      else break;
    }
    std::vector<std::size_t> want(ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(best));
    std::sort(want.begin(), want.end());
    ASSERT_EQ(r.selected, want);
  }
}

TEST(Budget, Validation) {
  EXPECT_THROW(Budget::ratio(0.0).validate(), Error);
  EXPECT_THROW(Budget::ratio(1.5).validate(), Error);
  EXPECT_THROW(Budget::sentences(0).validate(), Error);
  EXPECT_NO_THROW(Budget::ratio(1.0).validate());
}

TEST(TextRank, IdenticalSentencesUniform) {
  auto doc = text::make_document("The cat sat on the mat. The cat sat on the mat. The cat sat on the mat.");
  auto r = textrank_summarize(doc, RankConfig{}, Budget::sentences(2));
  for (double p : r.rank_scores) EXPECT_NEAR(p, 1.0 / 3.0, 1e-6);
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 1}));
}

TEST(TextRank, PositionVariantPrefersFirst) {
  auto doc = text::make_document("The cat sat on the mat. The cat sat on the mat. The cat sat on the mat.");
  RankConfig cfg;
  cfg.variant = RankVariant::Position;
  auto r = textrank_summarize(doc, cfg, Budget::sentences(1));
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{0}));
  EXPECT_GT(r.rank_scores[0], r.rank_scores[1]);
}

TEST(TextRank, BiasedFocusPicksMatchingSentence) {
  auto store = VectorStore::parse(std::string_view("cat 1 0 0 0\ndog 0 1 0 0\nriver 0 0 1 0\nstorm 0 0 0 1\n"));
  auto doc = text::make_document("A cat naps. A dog barks. A river flows. A storm comes.");
  RankConfig cfg;
  cfg.variant = RankVariant::Biased;
  for (std::size_t k = 0; k < 4; ++k) {
    cfg.focus = std::string(doc.sentence_text(k));
    auto r = textrank_summarize(doc, cfg, Budget::sentences(1), &store);
    EXPECT_EQ(r.selected, (std::vector<std::size_t>{k}));
  }
}

TEST(TextRank, BiasedErrors) {
  auto store = VectorStore::parse(std::string_view("cat 1 0\n"));
  auto doc = text::make_document("A cat naps. A dog barks.");
  RankConfig cfg;
  cfg.variant = RankVariant::Biased;
  EXPECT_EQ(code_of([&] { textrank_summarize(doc, cfg, Budget::sentences(1), &store); }), Errc::FocusMissing);
  cfg.focus = "cat";
  EXPECT_EQ(code_of([&] { textrank_summarize(doc, cfg, Budget::sentences(1), nullptr); }), Errc::MissingEmbeddings);
}

TEST(TextRank, OutputIsVerbatimAndWithinBudget) {
  std::mt19937 rng(8);
  for (int round = 0; round < 50; ++round) {
    auto doc = text::make_document(random_document(rng, 2 + rng() % 8));
    for (auto v : {RankVariant::Plain, RankVariant::Position, RankVariant::Topic}) {
      RankConfig cfg;
      cfg.variant = v;
      auto r = textrank_summarize(doc, cfg, Budget::ratio(0.4));
      EXPECT_LE(r.selected.size(), static_cast<std::size_t>(std::ceil(0.4 * doc.sentences.size())));
      EXPECT_TRUE(std::is_sorted(r.selected.begin(), r.selected.end()));
      for (std::size_t i : r.selected) EXPECT_NE(r.text.find(doc.sentence_text(i)), std::string::npos);
      double total = 0;
      for (double p : r.rank_scores) total += p;
      EXPECT_NEAR(total, 1.0, 1e-6);
    }
  }
}

TEST(ClusterSum, TwoClusterFixtureMatchesMinimumSse) {
  auto store = VectorStore::parse(std::string_view("alpha 0 0\nbeta 0 1\ngamma 10 10\ndelta 10 11\n"));
  auto doc = text::make_document("Alpha. Beta. Gamma. Delta.");
  std::vector<oracle::Point> pts{{0, 0}, {0, 1}, {10, 10}, {10, 11}};
  auto parts = oracle::best_two_partition(pts);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto r = cluster_summarize(doc, store, Budget::sentences(2), seed);
    ASSERT_EQ(r.selected.size(), 2u);
    // one representative from each optimal cluster
    for (const auto& part : parts) {
      int hits = 0;
      for (std::size_t i : r.selected) hits += std::count(part.begin(), part.end(), i) ? 1 : 0;
      EXPECT_EQ(hits, 1) << "seed " << seed;
    }
  }
}

TEST(ClusterSum, AllAndOne) {
  auto store = VectorStore::parse(std::string_view("alpha 0 0\nbeta 0 1\ngamma 10 10\ndelta 10 11\n"));
  auto doc = text::make_document("Alpha. Beta. Gamma. Delta.");
  EXPECT_EQ(cluster_summarize(doc, store, Budget::sentences(4), 1).selected, (std::vector<std::size_t>{0, 1, 2, 3}));

  auto three = text::make_document("Alpha. Beta. Gamma.");
  std::vector<oracle::Point> pts{{0, 0}, {0, 1}, {10, 10}};
  oracle::Point mean{10.0 / 3.0, 11.0 / 3.0};
  std::vector<double> d;
  for (const auto& p : pts) d.push_back(std::hypot(p[0] - mean[0], p[1] - mean[1]));
  auto one = cluster_summarize(three, store, Budget::sentences(1), 1);
  ASSERT_EQ(one.selected.size(), 1u);
  EXPECT_EQ(one.selected[0], static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin()));
}

TEST(ClusterSum, SeedReproducible) {
  auto store = VectorStore::parse(fixture::fixture_vectors());
  std::mt19937 rng(10);
  for (int round = 0; round < 20; ++round) {
    auto doc = text::make_document(random_document(rng, 8));
    auto a = cluster_summarize(doc, store, Budget::sentences(3), 42);
    auto b = cluster_summarize(doc, store, Budget::sentences(3), 42);
    EXPECT_EQ(a, b);
  }
}

TEST(ClusterSum, NoEmbeddableSentences) {
  auto store = VectorStore::parse(std::string_view("alpha 0 0\n"));
  auto doc = text::make_document("Nothing known. Still nothing.");
  EXPECT_EQ(code_of([&] { cluster_summarize(doc, store, Budget::sentences(1), 0); }), Errc::NoEmbeddableSentences);
}
