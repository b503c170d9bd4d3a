#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "swb/error.hpp"
#include "swb/text/tokenize.hpp"

namespace swb::text {

using NGram = std::vector<std::string>;

struct NGramCounts {
  std::size_t n = 1;
  std::map<NGram, std::size_t> counts;

  std::size_t total() const {
    std::size_t sum = 0;
    for (const auto& [_, c] : counts) sum += c;
    return sum;
  }

  std::size_t count(const NGram& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0 : it->second;
  }
};

inline NGramCounts ngrams(std::span<const std::string> terms, std::size_t n) {
  if (n < 1) throw Error(Errc::InvalidOrder, "n-gram order must be >= 1");
  NGramCounts out;
  out.n = n;
  if (terms.size() < n) return out;
  for (std::size_t i = 0; i + n <= terms.size(); ++i) {
    ++out.counts[NGram(terms.begin() + static_cast<std::ptrdiff_t>(i),
                       terms.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

inline std::vector<std::string> terms_of(std::span<const Token> tokens, bool use_stems) {
  std::vector<std::string> terms;
  terms.reserve(tokens.size());
  for (const Token& t : tokens) terms.push_back(use_stems ? t.stem : t.normalized);
  return terms;
}

inline NGramCounts ngrams(std::span<const Token> tokens, std::size_t n, bool use_stems) {
  auto terms = terms_of(tokens, use_stems);
  return ngrams(std::span<const std::string>(terms), n);
}

}  // namespace swb::text
