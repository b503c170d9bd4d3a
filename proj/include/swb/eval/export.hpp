#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "swb/error.hpp"
#include "swb/eval/run.hpp"

namespace swb::eval {

inline std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

// RFC 4180: quote fields holding a comma, quote or line break.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Aggregates: one row per model (sorted), one column per sub-score (sorted).
// A sub-score a model never received is left empty.
inline std::string export_csv(const EvalRun& run) {
  auto cols = run.subscores();
  std::string out = "model";
  for (const auto& c : cols) out += "," + csv_field(c);
  out += "\n";
  for (const auto& [model, subs] : run.aggregates) {
    out += csv_field(model);
    for (const auto& c : cols) {
      out += ",";
      auto it = subs.find(c);
      if (it != subs.end()) out += format_value(it->second);
    }
    out += "\n";
  }
  return out;
}

inline std::string latex_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\textbackslash{}"; break;
      case '&': case '%': case '$': case '#': case '_': case '{': case '}':
        out.push_back('\\');
        out.push_back(c);
        break;
      case '~': out += "\\textasciitilde{}"; break;
      case '^': out += "\\textasciicircum{}"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string export_latex(const EvalRun& run) {
  auto cols = run.subscores();
  if (run.aggregates.empty() || cols.empty()) throw Error(Errc::EmptyRun, "run has no aggregates to export");
  std::string out = "\\begin{tabular}{l" + std::string(cols.size(), 'r') + "}\n\\toprule\nmodel";
  for (const auto& c : cols) out += " & " + latex_escape(c);
  out += " \\\\\n\\midrule\n";
  for (const auto& [model, subs] : run.aggregates) {
    out += latex_escape(model);
    for (const auto& c : cols) {
      auto it = subs.find(c);
      out += " & " + (it == subs.end() ? std::string("--") : format_value(it->second));
    }
    out += " \\\\\n";
  }
  out += "\\bottomrule\n\\end{tabular}\n";
  return out;
}

enum class ExportFormat { Csv, Latex };

inline ExportFormat export_format_from_string(const std::string& s) {
  if (s == "csv") return ExportFormat::Csv;
  if (s == "latex") return ExportFormat::Latex;
  throw Error(Errc::InvalidConfig, "unknown export format '" + s + "' (csv, latex)");
}

inline std::string export_run(const EvalRun& run, ExportFormat f) {
  return f == ExportFormat::Csv ? export_csv(run) : export_latex(run);
}

}  // namespace swb::eval
