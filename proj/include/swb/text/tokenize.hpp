#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "swb/text/lexicon.hpp"
#include "swb/text/porter.hpp"
#include "swb/text/utf8.hpp"

namespace swb::text {

// Half-open byte range into the source string.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool operator==(const CharSpan&) const = default;
};

struct Token {
  std::string surface;
  std::string normalized;
  std::string stem;
  CharSpan char_span;
  bool is_stopword = false;
  bool is_numeric = false;
  bool is_capitalized = false;
  bool is_punct = false;

  // A non-punctuation token that is not a stopword.
  bool is_content() const { return !is_punct && !is_stopword; }

  bool operator==(const Token&) const = default;
};

namespace detail {

inline bool is_apostrophe(char32_t c) { return c == '\'' || c == 0x2019; }
inline bool is_hyphen(char32_t c) { return c == '-' || c == 0x2010 || c == 0x2011; }

// Extent of a word/number token starting at `pos`. Apostrophes and hyphens
// join when both neighbours are word characters; '.' and ',' join only
// between digits ("3.14", "1,000").
inline std::size_t scan_word(std::string_view s, std::size_t pos) {
  std::size_t end = pos;
  char32_t prev = 0;
  while (end < s.size()) {
    utf8::Decoded d = utf8::decode(s, end);
    if (utf8::is_word(d.code)) {
      prev = d.code;
      end += d.length;
      continue;
    }
    std::size_t next_pos = end + d.length;
    if (next_pos >= s.size()) break;
    char32_t next = utf8::decode(s, next_pos).code;
    bool joins = false;
    if (is_apostrophe(d.code) || is_hyphen(d.code)) {
      joins = utf8::is_word(prev) && utf8::is_word(next);
    } else if (d.code == '.' || d.code == ',') {
      joins = utf8::is_digit(prev) && utf8::is_digit(next);
    }
    if (!joins) break;
    end = next_pos;
    prev = d.code;
  }
  return end;
}

inline bool numeric_surface(std::string_view surface) {
  if (surface.empty() || !utf8::is_digit(static_cast<unsigned char>(surface.front()))) return false;
  for (char c : surface) {
    if (!(utf8::is_digit(static_cast<unsigned char>(c)) || c == '.' || c == ',')) return false;
  }
  return true;
}

}  // namespace detail

// Splits `text` into word, number and punctuation tokens. Offsets are shifted
// by `base_offset` so tokens of a sentence index into the full document.
inline std::vector<Token> tokenize(std::string_view text, bool sentence_initial,
                                   std::size_t base_offset = 0,
                                   const Lexicon& lexicon = Lexicon::english()) {
  std::vector<Token> tokens;
  bool seen_word = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    utf8::Decoded d = utf8::decode(text, pos);
    if (utf8::is_space(d.code) || d.code < 0x21) {
      pos += d.length;
      continue;
    }
    Token token;
    std::size_t end = 0;
    if (utf8::is_word(d.code)) {
      end = detail::scan_word(text, pos);
    } else {
      end = pos + d.length;
      token.is_punct = true;
    }
    token.surface = std::string(text.substr(pos, end - pos));
    token.normalized = utf8::lowercase(token.surface);
    token.char_span = {base_offset + pos, base_offset + end};
    if (!token.is_punct) {
      token.stem = porter_stem(token.normalized);
      token.is_stopword = lexicon.is_stopword(token.normalized);
      token.is_numeric = detail::numeric_surface(token.surface);
      bool first_word = !seen_word;
      seen_word = true;
      token.is_capitalized = utf8::is_upper(d.code) && !(sentence_initial && first_word);
    } else {
      token.stem = token.normalized;
    }
    tokens.push_back(std::move(token));
    pos = end;
  }
  return tokens;
}

}  // namespace swb::text
