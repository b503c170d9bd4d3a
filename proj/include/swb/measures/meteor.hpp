#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "swb/measures/score.hpp"
#include "swb/text/utf8.hpp"

namespace swb::measures {

// Synonym sets, one per line, comma-separated terms. Two words match when
// they share at least one set.
class SynonymLexicon {
 public:
  static SynonymLexicon parse(std::string_view contents) {
    SynonymLexicon lex;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= contents.size()) {
      std::size_t end = contents.find('\n', pos);
      if (end == std::string_view::npos) end = contents.size();
      std::string_view line = contents.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      std::string_view trimmed = trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      std::vector<std::string> terms;
      std::size_t start = 0;
      while (start <= trimmed.size()) {
        std::size_t comma = trimmed.find(',', start);
        if (comma == std::string_view::npos) comma = trimmed.size();
        std::string_view term = trim(trimmed.substr(start, comma - start));
        if (term.empty()) {
          throw Error(Errc::LexiconFormatError, "line " + std::to_string(line_no) + ": empty term");
        }
        terms.push_back(text::utf8::lowercase(term));
        start = comma + 1;
      }
      if (terms.size() < 2) {
        throw Error(Errc::LexiconFormatError, "line " + std::to_string(line_no) + ": a synset needs two terms");
      }
      std::size_t id = lex.synset_count_++;
      for (const auto& t : terms) lex.sets_[t].insert(id);
    }
    return lex;
  }

  static SynonymLexicon load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path);
    std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(contents);
  }

  bool synonyms(const std::string& a, const std::string& b) const {
    auto ia = sets_.find(a);
    auto ib = sets_.find(b);
    if (ia == sets_.end() || ib == sets_.end()) return false;
    for (std::size_t id : ia->second) {
      if (ib->second.count(id)) return true;
    }
    return false;
  }

  std::size_t synset_count() const { return synset_count_; }

 private:
  static std::string_view trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  }

  std::unordered_map<std::string, std::set<std::size_t>> sets_;
  std::size_t synset_count_ = 0;
};

struct MeteorAlignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (candidate, reference), by candidate position
  std::size_t matches = 0;
  std::size_t chunks = 0;
};

// Staged one-to-one alignment: exact, then stem, then synonym. Within a stage
// candidate tokens are visited left to right; each prefers the reference
// position right after its predecessor's match (keeping runs contiguous),
// otherwise the leftmost free matching position.
inline MeteorAlignment meteor_align(TokenSpan candidate, TokenSpan reference, const SynonymLexicon* lexicon) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> link(candidate.size(), kNone);
  std::vector<bool> ref_used(reference.size(), false);

  auto run_stage = [&](auto&& matches) {
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      if (link[i] != kNone) continue;
      std::size_t choice = kNone;
      if (i > 0 && link[i - 1] != kNone) {
        std::size_t next = link[i - 1] + 1;
        if (next < reference.size() && !ref_used[next] && matches(candidate[i], reference[next])) choice = next;
      }
      if (choice == kNone) {
        for (std::size_t j = 0; j < reference.size(); ++j) {
          if (!ref_used[j] && matches(candidate[i], reference[j])) {
            choice = j;
            break;
          }
        }
      }
      if (choice != kNone) {
        link[i] = choice;
        ref_used[choice] = true;
      }
    }
  };

  run_stage([](const text::Token& a, const text::Token& b) { return a.normalized == b.normalized; });
  run_stage([](const text::Token& a, const text::Token& b) { return a.stem == b.stem; });
  if (lexicon != nullptr) {
    run_stage([&](const text::Token& a, const text::Token& b) {
      return !a.is_punct && !b.is_punct && lexicon->synonyms(a.normalized, b.normalized);
    });
  }

  MeteorAlignment out;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (link[i] != kNone) out.pairs.emplace_back(i, link[i]);
  }
  out.matches = out.pairs.size();
  for (std::size_t k = 0; k < out.pairs.size(); ++k) {
    bool continues = k > 0 && out.pairs[k].first == out.pairs[k - 1].first + 1 &&
                     out.pairs[k].second == out.pairs[k - 1].second + 1;
    if (!continues) ++out.chunks;
  }
  return out;
}

// Fmean = 10PR / (R + 9P), fragmentation penalty 0.5 * (chunks / m)^3.
inline double meteor_from_alignment(const MeteorAlignment& a, std::size_t candidate_len, std::size_t reference_len) {
  if (a.matches == 0) return 0.0;
  double m = static_cast<double>(a.matches);
  double p = m / static_cast<double>(candidate_len);
  double r = m / static_cast<double>(reference_len);
  double fmean = 10.0 * p * r / (r + 9.0 * p);
  double frag = static_cast<double>(a.chunks) / m;
  double penalty = 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

// Multi-reference: the best-scoring reference wins.
inline MeasureScore meteor(TokenSpan candidate, std::span<const TokenSpan> references,
                           const SynonymLexicon* lexicon = nullptr) {
  require_text(candidate, references);
  double best = 0.0;
  for (TokenSpan ref : references) {
    auto alignment = meteor_align(candidate, ref, lexicon);
    best = std::max(best, meteor_from_alignment(alignment, candidate.size(), ref.size()));
  }
  return {"meteor", {{"meteor", best}}};
}

inline MeasureScore meteor(TokenSpan candidate, TokenSpan reference, const SynonymLexicon* lexicon = nullptr) {
  return meteor(candidate, std::span<const TokenSpan>(&reference, 1), lexicon);
}

}  // namespace swb::measures
