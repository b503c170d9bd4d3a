#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_set>

#include "swb/error.hpp"

namespace swb::text {

using WordSet = std::unordered_set<std::string>;

// Reads a one-entry-per-line list. Blank lines and lines starting with '#'
// are skipped; surrounding whitespace is trimmed; entries are lowercased.
inline WordSet parse_word_list(std::string_view contents) {
  WordSet words;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    std::size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(pos, end - pos);
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos) {
      auto last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      if (line.front() != '#') {
        std::string entry(line);
        for (char& c : entry) {
          if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        }
        words.insert(std::move(entry));
      }
    }
    pos = end + 1;
  }
  return words;
}

inline WordSet load_word_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_word_list(contents);
}

// Stopwords and abbreviations used by segmentation, tokenization and the
// content-word filters. Abbreviations are stored lowercase without their
// final period ("dr", "e.g").
struct Lexicon {
  WordSet stopwords;
  WordSet abbreviations;

  bool is_stopword(std::string_view normalized) const {
    return stopwords.find(std::string(normalized)) != stopwords.end();
  }
  bool is_abbreviation(std::string_view lowered) const {
    return abbreviations.find(std::string(lowered)) != abbreviations.end();
  }

  static const Lexicon& english() {
    static const Lexicon instance{
        WordSet{
            "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours",
            "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself",
            "it", "its", "itself", "they", "them", "their", "theirs", "themselves", "what", "which",
            "who", "whom", "this", "that", "these", "those", "am", "is", "are", "was", "were", "be",
            "been", "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an",
            "the", "and", "but", "if", "or", "because", "as", "until", "while", "of", "at", "by",
            "for", "with", "about", "against", "between", "into", "through", "during", "before",
            "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over",
            "under", "again", "further", "then", "once", "here", "there", "when", "where", "why",
            "how", "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no",
            "nor", "not", "only", "own", "same", "so", "than", "too", "very", "s", "t", "can",
            "will", "just", "don", "should", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain",
            "aren", "couldn", "didn", "doesn", "hadn", "hasn", "haven", "isn", "ma", "mightn",
            "mustn", "needn", "shan", "shouldn", "wasn", "weren", "won", "wouldn", "would", "could",
            "also", "may", "might", "must", "shall",
        },
        WordSet{
            "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "mt", "ave", "blvd", "rd", "vs",
            "etc", "e.g", "i.e", "cf", "al", "approx", "inc", "ltd", "co", "corp", "dept", "univ",
            "gen", "gov", "sen", "rep", "rev", "hon", "lt", "col", "capt", "cmdr", "sgt", "maj",
            "adm", "fig", "figs", "eq", "vol", "vols", "ch", "sec", "pp", "ed", "eds",
            "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec",
            "u.s", "u.k", "u.n", "a.m", "p.m", "ph.d", "ca", "viz",
        },
    };
    return instance;
  }
};

}  // namespace swb::text
