#include <gtest/gtest.h>

#include <random>

#include "../oracles.hpp"
#include "../support.hpp"
#include "swb/overlap.hpp"

using namespace swb;
using namespace swb::overlap;

namespace {

std::vector<text::Token> toks(const std::string& s) { return text::tokenize_text(s); }

std::vector<std::string> norm(const std::vector<text::Token>& t) {
  std::vector<std::string> out;
  for (const auto& x : t) out.push_back(x.normalized);
  return out;
}

std::string random_words(std::mt19937& rng, std::size_t n, std::size_t vocab) {
  static const std::vector<std::string> words{"a", "b", "c", "d", "e", "f", "the", "of"};
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + words[rng() % std::min(vocab, words.size())];
  return s;
}

}  // namespace

TEST(LexicalSpans, SharedPhrase) {
  auto a = toks("the black cat sat");
  auto b = toks("a black cat ran");
  auto p = lexical_spans(a, b);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].left, (TokenRange{1, 3}));
  EXPECT_EQ(p[0].right, (std::vector<TokenRange>{{1, 3}}));
  EXPECT_EQ(p[0].length, 2u);
}

TEST(LexicalSpans, IdenticalTextsOneSpan) {
  auto a = toks("one two three four five");
  auto p = lexical_spans(a, a);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].left, (TokenRange{0, 5}));
}

TEST(LexicalSpans, Duplicates) {
  auto a = toks("x y x y");
  auto b = toks("x y");
  auto once = lexical_spans(a, b);
  ASSERT_EQ(once.size(), 1u);
  EXPECT_EQ(once[0].left, (TokenRange{0, 2}));
  OverlapOptions dup;
  dup.preserve_duplicates = true;
  auto twice = lexical_spans(a, b, dup);
  ASSERT_EQ(twice.size(), 2u);
  EXPECT_EQ(twice[0].left, (TokenRange{0, 2}));
  EXPECT_EQ(twice[1].left, (TokenRange{2, 4}));
  EXPECT_EQ(twice[1].right, (std::vector<TokenRange>{{0, 2}}));
}

TEST(LexicalSpans, NothingShared) {
  EXPECT_TRUE(lexical_spans(toks("alpha beta"), toks("gamma delta")).empty());
  EXPECT_TRUE(lexical_spans(toks("alpha beta"), {}).empty());
}

TEST(LexicalSpans, IgnoreStopwordsDropsFillerRuns) {
  auto a = toks("of the river");
  auto b = toks("of the sea");
  EXPECT_EQ(lexical_spans(a, b).size(), 1u);
  OverlapOptions o;
  o.ignore_stopwords = true;
  EXPECT_TRUE(lexical_spans(a, b, o).empty());
}

TEST(LexicalSpans, RandomPairProperties) {
  std::mt19937 rng(21);
  for (int round = 0; round < 500; ++round) {
    auto a = toks(random_words(rng, 1 + rng() % 15, 2 + rng() % 5));
    auto b = toks(random_words(rng, 1 + rng() % 15, 2 + rng() % 5));
    auto na = norm(a), nb = norm(b);
    std::size_t total_by_min[4] = {0, 0, 0, 0};
    std::vector<SpanPair> prev;
    for (std::size_t min_n = 1; min_n <= 3; ++min_n) {
      OverlapOptions o;
      o.min_n = min_n;
      auto pairs = lexical_spans(a, b, o);
      // a larger min_n only cuts the greedy sequence short
      if (min_n > 1) {
        ASSERT_LE(pairs.size(), prev.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) ASSERT_EQ(pairs[i].left, prev[i].left);
      }
      prev = pairs;
      std::vector<int> used_a(a.size(), 0), used_b(b.size(), 0);
      std::size_t prev_len = SIZE_MAX;
      for (const auto& p : pairs) {
        ASSERT_GE(p.length, min_n);
        ASSERT_LE(p.length, prev_len);  // longest first
        prev_len = p.length;
        ASSERT_EQ(p.left.size(), p.length);
        for (const auto& r : p.right) {
          ASSERT_EQ(r.size(), p.length);
          for (std::size_t k = 0; k < p.length; ++k) ASSERT_EQ(na[p.left.start + k], nb[r.start + k]);
          for (std::size_t k = r.start; k < r.end; ++k) ASSERT_EQ(used_b[k]++, 0);
        }
        for (std::size_t k = p.left.start; k < p.left.end; ++k) ASSERT_EQ(used_a[k]++, 0);
        total_by_min[min_n] += p.length;
      }
      // no common run of length >= min_n remains between unused positions
      for (std::size_t i = 0; i + min_n <= a.size(); ++i) {
        for (std::size_t j = 0; j + min_n <= b.size(); ++j) {
          bool free_match = true;
          for (std::size_t k = 0; k < min_n && free_match; ++k) {
            free_match = !used_a[i + k] && !used_b[j + k] && na[i + k] == nb[j + k];
          }
          ASSERT_FALSE(free_match) << "leftover run at " << i << "," << j;
        }
      }
    }
    // at min 1 every token type is paired off completely
    EXPECT_EQ(total_by_min[1], oracle::clipped(na, nb, 1));
    EXPECT_GE(total_by_min[1], total_by_min[2]);
    EXPECT_GE(total_by_min[2], total_by_min[3]);
  }
}

TEST(SemanticLinks, LinksNearestAboveThreshold) {
  auto store = VectorStore::parse(std::string_view("cat 1 0\nkitten 0.9 0.1\ndog 0 1\n"));
  auto source = text::make_document("The cat naps. The dog barks.");
  auto summary = text::make_document("A kitten sleeps. Nothing known here.");
  auto links = semantic_links(summary.sentences, source.sentences, store, 0.6);
  ASSERT_EQ(links.size(), 1u);
  EXPECT_EQ(links[0].summary_index, 0u);
  EXPECT_EQ(links[0].source_index, 0u);
  EXPECT_NEAR(links[0].similarity, 0.9 / std::sqrt(0.82), 1e-6);
  EXPECT_TRUE(semantic_links(summary.sentences, source.sentences, store, 1.0).empty());
  EXPECT_THROW(semantic_links(summary.sentences, source.sentences, store, 1.5), Error);
}

TEST(Agreement, SymmetricRougeAndPairOracle) {
  std::mt19937 rng(31);
  for (int round = 0; round < 50; ++round) {
    std::vector<std::pair<std::string, std::string>> s;
    std::size_t k = 2 + rng() % 3;
    for (std::size_t i = 0; i < k; ++i) s.push_back({"m" + std::to_string(i), random_words(rng, 3 + rng() % 8, 6)});
    auto m = agreement_matrix(s);
    ASSERT_EQ(m.models.size(), k);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_DOUBLE_EQ(m.matrix[i][i], 1.0);
      for (std::size_t j = 0; j < k; ++j) {
        EXPECT_NEAR(m.matrix[i][j], m.matrix[j][i], 1e-12);
        if (i == j) continue;
        auto ci = norm(toks(s[i].second)), cj = norm(toks(s[j].second));
        auto want = oracle::prf(static_cast<double>(oracle::clipped(ci, cj, 1)), static_cast<double>(ci.size()),
                                static_cast<double>(cj.size()));
        EXPECT_NEAR(m.matrix[i][j], want.f, 1e-9);
      }
    }
  }
}

TEST(Agreement, Errors) {
  std::vector<std::pair<std::string, std::string>> one{{"a", "x y"}};
  EXPECT_THROW(agreement_matrix(one), Error);
  std::vector<std::pair<std::string, std::string>> two{{"a", "x y"}, {"b", "x z"}};
  try {
    agreement_matrix(two, "cider");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownMeasure);
  }
}
