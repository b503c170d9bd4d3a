#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "swb/error.hpp"

namespace swb::eval {

using json = nlohmann::json;

struct EvalExample {
  std::size_t id = 0;  // physical line number, 1-based
  std::string document;
  std::string reference;
  std::map<std::string, std::string> candidates;

  bool operator==(const EvalExample&) const = default;
};

struct LineError {
  std::size_t line = 0;
  Errc code = Errc::MalformedRecord;
  std::string message;

  std::string str() const { return "line " + std::to_string(line) + ": " + std::string(swb::to_string(code)) + ": " + message; }
};

class DatasetError : public Error {
 public:
  explicit DatasetError(LineError e) : Error(e.code, "line " + std::to_string(e.line) + ": " + e.message), err_(std::move(e)) {}
  const LineError& line_error() const { return err_; }

 private:
  LineError err_;
};

enum class ParseMode { Strict, Lenient };

// Evaluation rows carry reference + candidates; document rows need only a
// document (the multi-document upload variant).
enum class DatasetKind { Evaluation, Documents };

struct ParsedDataset {
  std::vector<EvalExample> examples;
  std::vector<LineError> errors;

  // Union of model ids, sorted.
  std::vector<std::string> models() const {
    std::set<std::string> ids;
    for (const auto& e : examples) {
      for (const auto& [m, _] : e.candidates) ids.insert(m);
    }
    return {ids.begin(), ids.end()};
  }
};

namespace detail {

inline bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; });
}

inline bool blank_text(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

inline EvalExample parse_line(std::string_view line, std::size_t line_no, DatasetKind kind) {
  auto fail = [&](Errc code, std::string msg) { throw DatasetError({line_no, code, std::move(msg)}); };
  json row = json::parse(line, nullptr, false);
  if (row.is_discarded()) fail(Errc::MalformedRecord, "not valid JSON");
  if (!row.is_object()) fail(Errc::MalformedRecord, "record must be a JSON object");

  EvalExample ex;
  ex.id = line_no;
  if (row.contains("document") && !row["document"].is_null()) {
    if (!row["document"].is_string()) fail(Errc::MalformedRecord, "\"document\" must be a string");
    ex.document = row["document"].get<std::string>();
  }
  if (kind == DatasetKind::Documents && blank_text(ex.document)) fail(Errc::MalformedRecord, "missing \"document\"");

  bool has_ref = row.contains("reference") && !row["reference"].is_null();
  if (has_ref && !row["reference"].is_string()) fail(Errc::MalformedRecord, "\"reference\" must be a string");
  if (has_ref) ex.reference = row["reference"].get<std::string>();
  if (kind == DatasetKind::Evaluation && blank_text(ex.reference)) fail(Errc::MissingReference, "missing \"reference\"");

  if (row.contains("candidates") && !row["candidates"].is_null()) {
    if (!row["candidates"].is_object()) fail(Errc::MalformedRecord, "\"candidates\" must be an object");
    for (auto it = row["candidates"].begin(); it != row["candidates"].end(); ++it) {
      if (it.key().empty()) fail(Errc::MalformedRecord, "empty model id");
      if (!it.value().is_string()) fail(Errc::MalformedRecord, "candidate \"" + it.key() + "\" must be a string");
      ex.candidates[it.key()] = it.value().get<std::string>();
    }
  }
  if (kind == DatasetKind::Evaluation && ex.candidates.empty()) fail(Errc::NoCandidates, "no candidates");
  return ex;
}

}  // namespace detail

// One example per non-blank line; ids are physical line numbers. Strict mode
// throws on the first bad line, lenient mode collects them.
inline ParsedDataset parse_dataset(std::string_view input, ParseMode mode = ParseMode::Strict,
                                   DatasetKind kind = DatasetKind::Evaluation) {
  ParsedDataset out;
  if (input.substr(0, 3) == "\xEF\xBB\xBF") input.remove_prefix(3);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool any = false;
  while (pos < input.size()) {
    std::size_t end = input.find('\n', pos);
    if (end == std::string_view::npos) end = input.size();
    std::string_view line = input.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (detail::blank(line)) continue;
    any = true;
    try {
      out.examples.push_back(detail::parse_line(line, line_no, kind));
    } catch (const DatasetError& e) {
      if (mode == ParseMode::Strict) throw;
      out.errors.push_back(e.line_error());
    }
  }
  if (!any) throw Error(Errc::EmptyDataset, "no records");
  return out;
}

inline ParsedDataset parse_dataset(std::istream& in, ParseMode mode = ParseMode::Strict,
                                   DatasetKind kind = DatasetKind::Evaluation) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), mode, kind);
}

// Inverse of parse_line for one example.
inline std::string to_jsonl_line(const EvalExample& ex) {
  json row = {{"document", ex.document}, {"reference", ex.reference}, {"candidates", ex.candidates}};
  return row.dump();
}

}  // namespace swb::eval
