#pragma once

#include <string>
#include <string_view>

namespace swb::text {

// Porter (1980) suffix-stripping stemmer. Operates on lowercase ASCII words;
// anything else is returned unchanged.
class PorterStemmer {
 public:
  std::string operator()(std::string_view word) const {
    for (char c : word) {
      if (c < 'a' || c > 'z') return std::string(word);
    }
    State s{std::string(word), static_cast<int>(word.size()) - 1, 0};
    if (s.k <= 1) return s.b;
    step1ab(s);
    if (s.k > 0) {
      step1c(s);
      step2(s);
      step3(s);
      step4(s);
      step5(s);
    }
    return s.b.substr(0, static_cast<std::size_t>(s.k + 1));
  }

 private:
  struct State {
    std::string b;
    int k;  // last index of the current stem
    int j;  // general offset set by ends()
  };

  static bool cons(const State& s, int i) {
    switch (s.b[static_cast<std::size_t>(i)]) {
      case 'a': case 'e': case 'i': case 'o': case 'u': return false;
      case 'y': return i == 0 ? true : !cons(s, i - 1);
      default: return true;
    }
  }

  // Number of VC sequences in b[0..j].
  static int m(const State& s) {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > s.j) return n;
      if (!cons(s, i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > s.j) return n;
        if (cons(s, i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > s.j) return n;
        if (!cons(s, i)) break;
        ++i;
      }
      ++i;
    }
  }

  static bool vowel_in_stem(const State& s) {
    for (int i = 0; i <= s.j; ++i) {
      if (!cons(s, i)) return true;
    }
    return false;
  }

  static bool double_cons(const State& s, int i) {
    if (i < 1) return false;
    if (s.b[static_cast<std::size_t>(i)] != s.b[static_cast<std::size_t>(i - 1)]) return false;
    return cons(s, i);
  }

  // consonant-vowel-consonant ending at i, where the last consonant is not w, x or y
  static bool cvc(const State& s, int i) {
    if (i < 2 || !cons(s, i) || cons(s, i - 1) || !cons(s, i - 2)) return false;
    char ch = s.b[static_cast<std::size_t>(i)];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  static bool ends(State& s, std::string_view suffix) {
    int len = static_cast<int>(suffix.size());
    if (len > s.k + 1) return false;
    if (std::string_view(s.b).substr(static_cast<std::size_t>(s.k - len + 1), suffix.size()) != suffix) {
      return false;
    }
    s.j = s.k - len;
    return true;
  }

  static void set_to(State& s, std::string_view replacement) {
    s.b.replace(static_cast<std::size_t>(s.j + 1), static_cast<std::size_t>(s.k - s.j), replacement);
    s.k = s.j + static_cast<int>(replacement.size());
  }

  static void replace_if_measured(State& s, std::string_view replacement) {
    if (m(s) > 0) set_to(s, replacement);
  }

  static void step1ab(State& s) {
    if (s.b[static_cast<std::size_t>(s.k)] == 's') {
      if (ends(s, "sses")) {
        s.k -= 2;
      } else if (ends(s, "ies")) {
        set_to(s, "i");
      } else if (s.b[static_cast<std::size_t>(s.k - 1)] != 's') {
        --s.k;
      }
    }
    if (ends(s, "eed")) {
      if (m(s) > 0) --s.k;
    } else if ((ends(s, "ed") || ends(s, "ing")) && vowel_in_stem(s)) {
      s.k = s.j;
      if (ends(s, "at")) {
        set_to(s, "ate");
      } else if (ends(s, "bl")) {
        set_to(s, "ble");
      } else if (ends(s, "iz")) {
        set_to(s, "ize");
      } else if (double_cons(s, s.k)) {
        --s.k;
        char ch = s.b[static_cast<std::size_t>(s.k)];
        if (ch == 'l' || ch == 's' || ch == 'z') ++s.k;
      } else {
        s.j = s.k;
        if (m(s) == 1 && cvc(s, s.k)) set_to(s, "e");
      }
    }
  }

  static void step1c(State& s) {
    if (ends(s, "y") && vowel_in_stem(s)) s.b[static_cast<std::size_t>(s.k)] = 'i';
  }

  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
  };

  // The first matching suffix ends the step, whether or not it is replaced.
  template <std::size_t N>
  static void apply_first(State& s, const Rule (&rules)[N]) {
    for (const Rule& rule : rules) {
      if (ends(s, rule.suffix)) {
        replace_if_measured(s, rule.replacement);
        return;
      }
    }
  }

  static void step2(State& s) {
    static constexpr Rule rules_a[] = {{"ational", "ate"}, {"tional", "tion"}};
    static constexpr Rule rules_c[] = {{"enci", "ence"}, {"anci", "ance"}};
    static constexpr Rule rules_e[] = {{"izer", "ize"}};
    static constexpr Rule rules_l[] = {
        {"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
    static constexpr Rule rules_o[] = {{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
    static constexpr Rule rules_s[] = {
        {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
    static constexpr Rule rules_t[] = {{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
    static constexpr Rule rules_g[] = {{"logi", "log"}};
    if (s.k < 1) return;
    switch (s.b[static_cast<std::size_t>(s.k - 1)]) {
      case 'a': apply_first(s, rules_a); break;
      case 'c': apply_first(s, rules_c); break;
      case 'e': apply_first(s, rules_e); break;
      case 'l': apply_first(s, rules_l); break;
      case 'o': apply_first(s, rules_o); break;
      case 's': apply_first(s, rules_s); break;
      case 't': apply_first(s, rules_t); break;
      case 'g': apply_first(s, rules_g); break;
      default: break;
    }
  }

  static void step3(State& s) {
    static constexpr Rule rules_e[] = {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
    static constexpr Rule rules_i[] = {{"iciti", "ic"}};
    static constexpr Rule rules_l[] = {{"ical", "ic"}, {"ful", ""}};
    static constexpr Rule rules_s[] = {{"ness", ""}};
    switch (s.b[static_cast<std::size_t>(s.k)]) {
      case 'e': apply_first(s, rules_e); break;
      case 'i': apply_first(s, rules_i); break;
      case 'l': apply_first(s, rules_l); break;
      case 's': apply_first(s, rules_s); break;
      default: break;
    }
  }

  static void step4(State& s) {
    if (s.k < 1) return;
    bool matched = false;
    switch (s.b[static_cast<std::size_t>(s.k - 1)]) {
      case 'a': matched = ends(s, "al"); break;
      case 'c': matched = ends(s, "ance") || ends(s, "ence"); break;
      case 'e': matched = ends(s, "er"); break;
      case 'i': matched = ends(s, "ic"); break;
      case 'l': matched = ends(s, "able") || ends(s, "ible"); break;
      case 'n': matched = ends(s, "ant") || ends(s, "ement") || ends(s, "ment") || ends(s, "ent"); break;
      case 'o':
        if (ends(s, "ion") && s.j >= 0 &&
            (s.b[static_cast<std::size_t>(s.j)] == 's' || s.b[static_cast<std::size_t>(s.j)] == 't')) {
          matched = true;
        } else {
          matched = ends(s, "ou");
        }
        break;
      case 's': matched = ends(s, "ism"); break;
      case 't': matched = ends(s, "ate") || ends(s, "iti"); break;
      case 'u': matched = ends(s, "ous"); break;
      case 'v': matched = ends(s, "ive"); break;
      case 'z': matched = ends(s, "ize"); break;
      default: break;
    }
    if (matched && m(s) > 1) s.k = s.j;
  }

  static void step5(State& s) {
    s.j = s.k;
    if (s.b[static_cast<std::size_t>(s.k)] == 'e') {
      int a = m(s);
      if (a > 1 || (a == 1 && !cvc(s, s.k - 1))) --s.k;
    }
    if (s.b[static_cast<std::size_t>(s.k)] == 'l' && double_cons(s, s.k) && m(s) > 1) --s.k;
  }
};

inline std::string porter_stem(std::string_view word) { return PorterStemmer{}(word); }

}  // namespace swb::text
