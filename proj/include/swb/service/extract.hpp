#pragma once

#include <algorithm>
#include <chrono>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include <httplib.h>

#include "swb/error.hpp"
#include "swb/text/utf8.hpp"

namespace swb::service {

struct ExtractedPage {
  std::string title;
  std::string text;
};

namespace detail {

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::string decode_entities(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    std::size_t semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    std::string_view name = s.substr(i + 1, semi - i - 1);
    char32_t cp = 0;
    if (name == "amp") cp = '&';
    else if (name == "lt") cp = '<';
    else if (name == "gt") cp = '>';
    else if (name == "quot") cp = '"';
    else if (name == "apos") cp = '\'';
    else if (name == "nbsp") cp = ' ';
    else if (name == "mdash") cp = 0x2014;
    else if (name == "ndash") cp = 0x2013;
    else if (name == "hellip") cp = 0x2026;
    else if (name == "rsquo") cp = 0x2019;
    else if (name == "lsquo") cp = 0x2018;
    else if (name == "ldquo") cp = 0x201C;
    else if (name == "rdquo") cp = 0x201D;
    else if (name.size() > 1 && name[0] == '#') {
      try {
        bool hex = name[1] == 'x' || name[1] == 'X';
        cp = static_cast<char32_t>(std::stoul(std::string(name.substr(hex ? 2 : 1)), nullptr, hex ? 16 : 10));
      } catch (const std::exception&) {
        cp = 0;
      }
    }
    if (cp == 0 || cp > 0x10FFFF) {
      out.push_back('&');
      continue;
    }
    text::utf8::append(out, cp);
    i = semi;
  }
  return out;
}

inline std::string collapse_space(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

// Text between the first <tag ...> and its closing tag.
inline std::string element_text(const std::string& html, const std::string& lower, const std::string& tag) {
  std::size_t open = lower.find("<" + tag);
  while (open != std::string::npos) {
    char next = open + tag.size() + 1 < lower.size() ? lower[open + tag.size() + 1] : '>';
    if (next == '>' || std::isspace(static_cast<unsigned char>(next))) break;
    open = lower.find("<" + tag, open + 1);
  }
  if (open == std::string::npos) return {};
  std::size_t start = lower.find('>', open);
  if (start == std::string::npos) return {};
  std::size_t end = lower.find("</" + tag, start);
  if (end == std::string::npos) return {};
  std::string inner = html.substr(start + 1, end - start - 1);
  // drop nested markup
  std::string plain;
  bool in_tag = false;
  for (char c : inner) {
    if (c == '<') in_tag = true;
    else if (c == '>') in_tag = false;
    else if (!in_tag) plain.push_back(c);
  }
  return collapse_space(decode_entities(plain));
}

inline bool is_block_tag(std::string_view name) {
  static const char* blocks[] = {"p",     "div",   "br",      "li",     "ul",  "ol",   "h1",     "h2",
                                 "h3",    "h4",    "h5",      "h6",     "tr",  "td",   "th",     "table",
                                 "section", "article", "header", "footer", "nav", "aside", "blockquote", "pre",
                                 "main",  "form",  "figure",  "figcaption", "dl", "dt", "dd",   "hr"};
  for (const char* b : blocks) {
    if (name == b) return true;
  }
  return false;
}

}  // namespace detail

// Main-text heuristic: split the page into blocks at block-level tags and
// keep the contiguous run of substantial blocks with the most text.
inline ExtractedPage extract_main_text(const std::string& html, std::size_t min_block_chars = 40) {
  ExtractedPage page;
  std::string lower = detail::ascii_lower(html);
  page.title = detail::element_text(html, lower, "title");
  if (page.title.empty()) page.title = detail::element_text(html, lower, "h1");

  std::vector<std::string> blocks;
  std::string current;
  auto flush = [&] {
    std::string b = detail::collapse_space(detail::decode_entities(current));
    blocks.push_back(std::move(b));
    current.clear();
  };
  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      current.push_back(html[i++]);
      continue;
    }
    if (lower.compare(i, 4, "<!--") == 0) {
      std::size_t end = lower.find("-->", i + 4);
      i = end == std::string::npos ? html.size() : end + 3;
      continue;
    }
    std::size_t close = lower.find('>', i);
    if (close == std::string::npos) break;
    std::size_t name_start = i + 1 + (lower[i + 1] == '/' ? 1 : 0);
    std::size_t name_end = name_start;
    while (name_end < close && std::isalnum(static_cast<unsigned char>(lower[name_end]))) ++name_end;
    std::string name = lower.substr(name_start, name_end - name_start);
    bool closing = lower[i + 1] == '/';
    if (!closing && (name == "script" || name == "style" || name == "noscript" || name == "head" ||
                     name == "svg" || name == "template")) {
      std::size_t end = lower.find("</" + name, close);
      end = end == std::string::npos ? html.size() : lower.find('>', end);
      i = end == std::string::npos ? html.size() : end + 1;
      flush();
      continue;
    }
    if (detail::is_block_tag(name)) flush();
    i = close + 1;
  }
  flush();

  // best run of consecutive substantial blocks; empty blocks don't break a run
  std::size_t best_chars = 0, best_start = 0, best_end = 0;
  std::size_t run_chars = 0, run_start = 0;
  bool in_run = false;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) continue;
    if (blocks[b].size() >= min_block_chars) {
      if (!in_run) {
        in_run = true;
        run_start = b;
        run_chars = 0;
      }
      run_chars += blocks[b].size();
      if (run_chars > best_chars) {
        best_chars = run_chars;
        best_start = run_start;
        best_end = b + 1;
      }
    } else {
      in_run = false;
    }
  }
  for (std::size_t b = best_start; b < best_end; ++b) {
    if (blocks[b].empty()) continue;
    if (!page.text.empty()) page.text += "\n\n";
    page.text += blocks[b];
  }
  if (page.text.empty()) {
    // short pages: everything that is there
    for (const auto& b : blocks) {
      if (b.empty()) continue;
      if (!page.text.empty()) page.text += "\n\n";
      page.text += b;
    }
  }
  if (page.text.empty()) throw Error(Errc::EmptyDocument, "no text found on the page");
  return page;
}

// GETs an http(s) page, following redirects.
inline ExtractedPage fetch_page(const std::string& url, std::chrono::seconds timeout = std::chrono::seconds(20)) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(Errc::FetchError, "not a URL: " + url);
  std::string s = detail::ascii_lower(url.substr(0, scheme));
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (s == "https") throw Error(Errc::FetchError, "https is not supported by this build");
#endif
  if (s != "http" && s != "https") throw Error(Errc::FetchError, "unsupported scheme: " + s);
  auto slash = url.find('/', scheme + 3);
  std::string origin = url.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : url.substr(slash);
  httplib::Client cli(origin);
  cli.set_follow_location(true);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  auto res = cli.Get(path);
  if (!res) throw Error(Errc::FetchError, url + ": " + httplib::to_string(res.error()));
  if (res->status != 200) throw Error(Errc::FetchError, url + ": HTTP " + std::to_string(res->status));
  return extract_main_text(res->body);
}

}  // namespace swb::service
