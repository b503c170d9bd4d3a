#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swb/error.hpp"
#include "swb/text/tokenize.hpp"

namespace swb::text {

struct Sentence {
  std::size_t index = 0;
  std::vector<Token> tokens;
  CharSpan char_span;

  std::size_t word_count() const {
    std::size_t n = 0;
    for (const Token& t : tokens) n += t.is_punct ? 0 : 1;
    return n;
  }

  bool operator==(const Sentence&) const = default;
};

struct Document {
  std::optional<Sentence> title;  // spans index into title_raw
  std::string title_raw;
  std::vector<Sentence> sentences;
  std::string raw;

  std::string_view sentence_text(std::size_t i) const {
    const CharSpan& span = sentences.at(i).char_span;
    return std::string_view(raw).substr(span.start, span.size());
  }

  std::vector<Token> all_tokens() const {
    std::vector<Token> out;
    for (const Sentence& s : sentences) out.insert(out.end(), s.tokens.begin(), s.tokens.end());
    return out;
  }
};

namespace detail {

inline bool is_terminal(char32_t c) { return c == '.' || c == '!' || c == '?' || c == 0x2026; }

inline bool is_closer(char32_t c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == 0x201D || c == 0x2019 || c == 0xBB;
}

inline bool is_opener(char32_t c) {
  return c == '"' || c == '\'' || c == '(' || c == '[' || c == 0x201C || c == 0x2018 || c == 0xAB;
}

inline std::size_t skip_space(std::string_view s, std::size_t pos) {
  while (pos < s.size()) {
    utf8::Decoded d = utf8::decode(s, pos);
    if (!utf8::is_space(d.code) && d.code >= 0x21) break;
    pos += d.length;
  }
  return pos;
}

// The whitespace-delimited chunk ending just before `dot`, stripped of
// leading openers and lowercased.
inline std::string word_before(std::string_view s, std::size_t start, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > start) {
    unsigned char c = static_cast<unsigned char>(s[begin - 1]);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') break;
    --begin;
  }
  while (begin < dot && is_opener(static_cast<unsigned char>(s[begin]))) ++begin;
  return utf8::lowercase(s.substr(begin, dot - begin));
}

}  // namespace detail

// Rule-based segmentation: a boundary follows a run of terminal punctuation
// (plus closing quotes/brackets) when whitespace and then an uppercase letter
// or digit follow. A single period after a known abbreviation never ends a
// sentence.
inline std::vector<Sentence> split_sentences(std::string_view raw,
                                             const Lexicon& lexicon = Lexicon::english()) {
  std::vector<CharSpan> spans;
  std::size_t start = detail::skip_space(raw, 0);
  if (start >= raw.size()) throw Error(Errc::EmptyInput, "text is empty or whitespace-only");

  std::size_t pos = start;
  std::size_t last_nonspace_end = start;
  while (pos < raw.size()) {
    utf8::Decoded d = utf8::decode(raw, pos);
    if (!detail::is_terminal(d.code)) {
      pos += d.length;
      if (!utf8::is_space(d.code) && d.code >= 0x21) last_nonspace_end = pos;
      continue;
    }
    std::size_t term_begin = pos;
    std::size_t terminal_count = 0;
    std::size_t end = pos;
    while (end < raw.size()) {
      utf8::Decoded t = utf8::decode(raw, end);
      if (!detail::is_terminal(t.code)) break;
      ++terminal_count;
      end += t.length;
    }
    while (end < raw.size()) {
      utf8::Decoded t = utf8::decode(raw, end);
      if (!detail::is_closer(t.code)) break;
      end += t.length;
    }
    last_nonspace_end = end;
    pos = end;

    if (end >= raw.size()) break;
    utf8::Decoded after = utf8::decode(raw, end);
    if (!utf8::is_space(after.code)) continue;
    std::size_t next = detail::skip_space(raw, end);
    if (next >= raw.size()) break;
    while (next < raw.size()) {
      utf8::Decoded o = utf8::decode(raw, next);
      if (!detail::is_opener(o.code)) break;
      next += o.length;
    }
    if (next >= raw.size()) continue;
    char32_t head = utf8::decode(raw, next).code;
    if (!(utf8::is_upper(head) || utf8::is_digit(head))) continue;
    if (terminal_count == 1 && raw[term_begin] == '.' &&
        lexicon.is_abbreviation(detail::word_before(raw, start, term_begin))) {
      continue;
    }
    spans.push_back({start, end});
    start = detail::skip_space(raw, end);
    pos = start;
    last_nonspace_end = start;
  }
  if (start < raw.size()) spans.push_back({start, std::max(last_nonspace_end, start)});

  std::vector<Sentence> sentences;
  sentences.reserve(spans.size());
  for (const CharSpan& span : spans) {
    Sentence s;
    s.index = sentences.size();
    s.char_span = span;
    s.tokens = tokenize(raw.substr(span.start, span.size()), true, span.start, lexicon);
    sentences.push_back(std::move(s));
  }
  return sentences;
}

inline Document make_document(std::string raw, std::optional<std::string> title = std::nullopt,
                              const Lexicon& lexicon = Lexicon::english()) {
  Document doc;
  doc.raw = std::move(raw);
  doc.sentences = split_sentences(doc.raw, lexicon);
  if (title) {
    doc.title_raw = std::move(*title);
    auto tokens = tokenize(doc.title_raw, true, 0, lexicon);
    if (!tokens.empty()) {
      Sentence t;
      t.char_span = {tokens.front().char_span.start, tokens.back().char_span.end};
      t.tokens = std::move(tokens);
      doc.title = std::move(t);
    }
  }
  return doc;
}

// Tokens of an arbitrary text, segmented first so sentence-initial
// capitalization is handled. Whitespace-only text yields no tokens.
inline std::vector<Token> tokenize_text(std::string_view text,
                                        const Lexicon& lexicon = Lexicon::english()) {
  if (detail::skip_space(text, 0) >= text.size()) return {};
  std::vector<Token> out;
  for (Sentence& s : split_sentences(text, lexicon)) {
    for (Token& t : s.tokens) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace swb::text
