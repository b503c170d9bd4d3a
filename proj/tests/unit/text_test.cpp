#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "swb/text/document.hpp"
#include "swb/text/ngrams.hpp"
#include "swb/text/porter.hpp"
#include "swb/text/tfidf.hpp"

using namespace swb;
using namespace swb::text;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& t) {
  std::vector<std::string> out;
  for (const auto& x : t) out.push_back(x.surface);
  return out;
}

}  // namespace

TEST(SplitSentences, TwoTerminalPeriods) {
  auto s = split_sentences("A. B.");
  ASSERT_EQ(s.size(), 2u);
  auto doc = make_document("A. B.");
  EXPECT_EQ(doc.sentence_text(0), "A.");
  EXPECT_EQ(doc.sentence_text(1), "B.");
}

TEST(SplitSentences, AbbreviationIsNotABoundary) {
  auto doc = make_document("Dr. Smith left. He returned.");
  ASSERT_EQ(doc.sentences.size(), 2u);
  EXPECT_EQ(doc.sentence_text(0), "Dr. Smith left.");
  EXPECT_EQ(doc.sentence_text(1), "He returned.");
}

TEST(SplitSentences, NoTerminalPunctuation) {
  EXPECT_EQ(split_sentences("no terminal punctuation").size(), 1u);
}

TEST(SplitSentences, WhitespaceOnlyIsEmptyInput) {
  try {
    split_sentences(" \n\t ");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyInput);
  }
}

TEST(SplitSentences, IndicesContiguousAndSpansIncreasing) {
  auto doc = make_document("One here. Two there! Three? 4 is a number. Done");
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    EXPECT_EQ(doc.sentences[i].index, i);
    EXPECT_FALSE(doc.sentences[i].tokens.empty());
    if (i) EXPECT_LE(doc.sentences[i - 1].char_span.end, doc.sentences[i].char_span.start);
  }
}

TEST(Tokenize, SurfacesAndNormalized) {
  auto t = tokenize("The cat sat.", true);
  EXPECT_EQ(surfaces(t), (std::vector<std::string>{"The", "cat", "sat", "."}));
  std::vector<std::string> norm;
  for (const auto& x : t) norm.push_back(x.normalized);
  EXPECT_EQ(norm, (std::vector<std::string>{"the", "cat", "sat", "."}));
}

TEST(Tokenize, CapitalizationAndNumbers) {
  auto t = tokenize("Paris in 1889", true);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_FALSE(t[0].is_capitalized);
  EXPECT_FALSE(t[1].is_capitalized);
  EXPECT_FALSE(t[2].is_capitalized);
  EXPECT_FALSE(t[0].is_numeric);
  EXPECT_FALSE(t[1].is_numeric);
  EXPECT_TRUE(t[2].is_numeric);

  auto u = tokenize("met Alice", false);
  ASSERT_EQ(u.size(), 2u);
  EXPECT_FALSE(u[0].is_capitalized);
  EXPECT_TRUE(u[1].is_capitalized);
}

TEST(Tokenize, PunctuationOnlyYieldsPunctTokens) {
  for (const auto& t : tokenize("?!", false)) EXPECT_TRUE(t.is_punct);
}

TEST(Tokenize, OffsetsReproduceSurfacesOnRandomText) {
  std::mt19937 rng(3);
  const std::vector<std::string> pieces{"cat", "Dog", "3.14", "naïve", "co-op", "don't", ",", ".", "!", "é", "  ",
                                        "\n", "Mr.", "1,000", "(x)", "—", "“quoted”"};
  for (int round = 0; round < 300; ++round) {
    std::string text;
    for (int i = 0; i < 12; ++i) {
      text += pieces[rng() % pieces.size()];
      if (rng() % 2) text += " ";
    }
    if (text.find_first_not_of(" \n") == std::string::npos) continue;
    auto doc = make_document(text);
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) {
        ASSERT_LT(t.char_span.start, t.char_span.end);
        ASSERT_EQ(text.substr(t.char_span.start, t.char_span.size()), t.surface);
        ASSERT_EQ(t.normalized, utf8::lowercase(t.surface));
      }
    }
    // same bytes, same structure
    auto again = make_document(text);
    ASSERT_EQ(again.sentences, doc.sentences);
  }
}

TEST(NGrams, CountsAndMass) {
  std::vector<std::string> t{"a", "b", "a"};
  auto one = ngrams(std::span<const std::string>(t), 1);
  EXPECT_EQ(one.counts.size(), 2u);
  EXPECT_EQ(one.counts.at({"a"}), 2u);
  EXPECT_EQ(one.counts.at({"b"}), 1u);
  auto two = ngrams(std::span<const std::string>(t), 2);
  EXPECT_EQ(two.counts.size(), 2u);
  EXPECT_EQ(two.counts.at((NGram{"a", "b"})), 1u);
  EXPECT_EQ(two.counts.at((NGram{"b", "a"})), 1u);
  std::vector<std::string> single{"a"};
  EXPECT_TRUE(ngrams(std::span<const std::string>(single), 2).counts.empty());
}

TEST(NGrams, ZeroOrderIsInvalid) {
  std::vector<std::string> t{"a"};
  try {
    ngrams(std::span<const std::string>(t), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidOrder);
  }
}

TEST(NGrams, TotalMassProperty) {
  std::mt19937 rng(5);
  for (int round = 0; round < 200; ++round) {
    std::vector<std::string> t(rng() % 9);
    for (auto& x : t) x = std::string(1, static_cast<char>('a' + rng() % 3));
    for (std::size_t n = 1; n <= 4; ++n) {
      auto g = ngrams(std::span<const std::string>(t), n);
      std::size_t mass = 0;
      for (const auto& [k, c] : g.counts) {
        EXPECT_EQ(k.size(), n);
        EXPECT_GE(c, 1u);
        mass += c;
      }
      EXPECT_EQ(mass, t.size() >= n ? t.size() - n + 1 : 0);
    }
  }
}

TEST(Porter, KnownStems) {
  EXPECT_EQ(porter_stem("caresses"), "caress");
  EXPECT_EQ(porter_stem("ponies"), "poni");
  EXPECT_EQ(porter_stem("relational"), "relat");
  EXPECT_EQ(porter_stem("running"), "run");
  EXPECT_EQ(porter_stem("hopeful"), "hope");
  EXPECT_EQ(porter_stem("generalization"), "gener");
}

TEST(TfIdf, Formula) {
  std::vector<std::vector<std::string>> two{{"x"}, {"x"}};
  EXPECT_DOUBLE_EQ(TfIdfModel::fit(two).idf("x"), 1.0);
  std::vector<std::vector<std::string>> three{{"t"}, {"u"}, {"v"}};
  auto m = TfIdfModel::fit(three);
  EXPECT_NEAR(m.idf("t"), std::log(4.0 / 2.0) + 1.0, 1e-12);
  EXPECT_NEAR(m.idf("t"), 1.6931, 1e-4);
  EXPECT_NEAR(m.idf("unseen"), std::log(4.0) + 1.0, 1e-12);
}

TEST(TfIdf, DecreasesInDocFreq) {
  std::vector<std::vector<std::string>> docs{{"a", "b", "c"}, {"a", "b"}, {"a"}, {"z"}};
  auto m = TfIdfModel::fit(docs);
  EXPECT_GT(m.idf("c"), m.idf("b"));
  EXPECT_GT(m.idf("b"), m.idf("a"));
  std::vector<std::vector<std::string>> all{{"q"}, {"q"}, {"q"}};
  EXPECT_DOUBLE_EQ(TfIdfModel::fit(all).idf("q"), 1.0);
}

TEST(TfIdf, EmptyCorpus) {
  std::vector<std::vector<std::string>> none;
  EXPECT_THROW(TfIdfModel::fit(none), Error);
}
