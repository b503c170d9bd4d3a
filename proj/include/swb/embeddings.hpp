#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "swb/error.hpp"
#include "swb/text/tokenize.hpp"

namespace swb {

// Immutable static word-vector table. Vectors live in one contiguous
// row-major buffer of floats; arithmetic is done in double.
class VectorStore {
 public:
  VectorStore() = default;

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }
  bool contains(const std::string& term) const { return index_.count(term) != 0; }

  std::optional<std::span<const float>> find(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return std::span<const float>(data_.data() + it->second * dimension_, dimension_);
  }

  // Parses the whitespace-separated text format. An optional leading
  // "count dimension" header is skipped; duplicate words keep their first row.
  static VectorStore parse(std::istream& in) {
    VectorStore store;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string_view> fields;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      split_fields(line, fields);
      if (fields.empty()) continue;
      if (line_no == 1 && fields.size() == 2 && is_integer(fields[0]) && is_integer(fields[1])) {
        continue;
      }
      if (fields.size() < 2) {
        throw Error(Errc::FormatError, "line " + std::to_string(line_no) + ": expected a word and values");
      }
      std::size_t dim = fields.size() - 1;
      if (store.dimension_ == 0) {
        store.dimension_ = dim;
      } else if (dim != store.dimension_) {
        throw Error(Errc::DimensionMismatch, "line " + std::to_string(line_no) + ": expected " +
                                                 std::to_string(store.dimension_) + " values, found " +
                                                 std::to_string(dim));
      }
      std::string word(fields[0]);
      if (store.index_.count(word)) continue;
      std::size_t row = store.index_.size();
      store.data_.resize((row + 1) * dim);
      for (std::size_t i = 0; i < dim; ++i) {
        std::string_view f = fields[i + 1];
        float value = 0.0f;
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
        if (ec != std::errc() || ptr != f.data() + f.size()) {
          throw Error(Errc::FormatError,
                      "line " + std::to_string(line_no) + ": bad number '" + std::string(f) + "'");
        }
        store.data_[row * dim + i] = value;
      }
      store.index_.emplace(std::move(word), row);
    }
    if (store.index_.empty()) throw Error(Errc::EmptyFile, "no vectors found");
    return store;
  }

  static VectorStore parse(std::string_view contents) {
    std::istringstream in{std::string(contents)};
    return parse(in);
  }

 private:
  static void split_fields(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
      out.push_back(line.substr(pos, end - pos));
      pos = end;
    }
  }

  static bool is_integer(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  }

  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;
};

inline VectorStore load_vectors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return VectorStore::parse(in);
}

// Cosine similarity; 0 when either vector is zero.
template <typename A, typename B>
double cosine(std::span<const A> a, std::span<const B> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::DimensionMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " components");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double x = static_cast<double>(a[i]);
    double y = static_cast<double>(b[i]);
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  if (dot == na && na == nb) return 1.0;
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  return cosine(std::span<const double>(a), std::span<const double>(b));
}

struct PooledEmbedding {
  std::vector<double> vector;
  std::size_t support = 0;
};

// Mean of the vectors of in-vocabulary content tokens (stopwords and
// punctuation are skipped). No support yields the zero vector.
inline PooledEmbedding pool_mean(std::span<const text::Token> tokens, const VectorStore& store) {
  PooledEmbedding out;
  out.vector.assign(store.dimension(), 0.0);
  for (const text::Token& t : tokens) {
    if (!t.is_content()) continue;
    auto v = store.find(t.normalized);
    if (!v) continue;
    for (std::size_t i = 0; i < v->size(); ++i) out.vector[i] += static_cast<double>((*v)[i]);
    ++out.support;
  }
  if (out.support > 0) {
    for (double& x : out.vector) x /= static_cast<double>(out.support);
  }
  return out;
}

}  // namespace swb
