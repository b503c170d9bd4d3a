#pragma once

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swb/error.hpp"

namespace swb::plugin {

using json = nlohmann::json;

enum class PluginType { Summarizer, Measure };

inline std::string to_string(PluginType t) { return t == PluginType::Summarizer ? "summarizer" : "measure"; }

inline std::optional<PluginType> plugin_type_from_string(const std::string& s) {
  if (s == "summarizer") return PluginType::Summarizer;
  if (s == "measure") return PluginType::Measure;
  return std::nullopt;
}

enum class ArgKind { String, Int, Float, Bool, Categorical };

inline std::string to_string(ArgKind k) {
  switch (k) {
    case ArgKind::String: return "string";
    case ArgKind::Int: return "int";
    case ArgKind::Float: return "float";
    case ArgKind::Bool: return "bool";
    case ArgKind::Categorical: return "categorical";
  }
  return "string";
}

inline std::optional<ArgKind> arg_kind_from_string(const std::string& s) {
  for (ArgKind k : {ArgKind::String, ArgKind::Int, ArgKind::Float, ArgKind::Bool, ArgKind::Categorical}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

struct ArgumentSpec {
  std::string name;
  ArgKind kind = ArgKind::String;
  json default_value;
  std::vector<std::string> choices;
  std::optional<double> min;
  std::optional<double> max;

  bool operator==(const ArgumentSpec&) const = default;
};

struct ScoreRange {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  bool operator==(const ScoreRange&) const = default;
};

struct PluginManifest {
  std::string name;
  PluginType type = PluginType::Summarizer;
  std::string version;
  std::string source;
  std::string citation;
  std::vector<ArgumentSpec> arguments;
  ScoreRange score_range;  // measures only; [0, 1] unless declared
  bool corpus_level = false;  // measures only; wants the whole batch in one call

  const ArgumentSpec* argument(const std::string& arg) const {
    for (const auto& a : arguments) {
      if (a.name == arg) return &a;
    }
    return nullptr;
  }

  bool operator==(const PluginManifest&) const = default;
};

struct Violation {
  Errc code;
  std::string detail;

  std::string str() const {
    return std::string(swb::to_string(code)) + (detail.empty() ? "" : ": " + detail);
  }
  bool operator==(const Violation&) const = default;
};

// Carries every violation; code() and the first line name the first one.
class ManifestError : public Error {
 public:
  explicit ManifestError(std::vector<Violation> v)
      : Error(v.front().code, join(v)), violations_(std::move(v)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<Violation>& v) {
    std::string out = v.front().detail;
    for (std::size_t i = 1; i < v.size(); ++i) out += "\n" + v[i].str();
    return out;
  }
  std::vector<Violation> violations_;
};

// Argument validation failure with one message per offending argument.
class ArgumentError : public Error {
 public:
  explicit ArgumentError(std::vector<std::string> errors)
      : Error(Errc::ArgumentValidation, join(errors)), errors_(std::move(errors)) {}

  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& e) {
    std::string msg;
    for (const auto& x : e) msg += (msg.empty() ? "" : "; ") + x;
    return msg;
  }
  std::vector<std::string> errors_;
};

inline bool is_semver(const std::string& v) {
  static const std::regex re(
      R"(^(0|[1-9]\d*)\.(0|[1-9]\d*)\.(0|[1-9]\d*))"
      R"((?:-((?:0|[1-9]\d*|\d*[a-zA-Z-][0-9a-zA-Z-]*)(?:\.(?:0|[1-9]\d*|\d*[a-zA-Z-][0-9a-zA-Z-]*))*))?)"
      R"((?:\+([0-9a-zA-Z-]+(?:\.[0-9a-zA-Z-]+)*))?$)");
  return std::regex_match(v, re);
}

namespace detail {

// Plain scalars are typed the way YAML 1.2 core schema would; quoted ones
// stay strings.
inline json scalar_to_json(const YAML::Node& n) {
  const std::string& s = n.Scalar();
  if (n.Tag() == "!") return s;
  if (s == "~" || s == "null" || s == "Null" || s == "NULL" || s.empty()) return nullptr;
  if (s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "false" || s == "False" || s == "FALSE") return false;
  static const std::regex int_re(R"(^[-+]?[0-9]+$)");
  static const std::regex float_re(R"(^[-+]?(\.[0-9]+|[0-9]+(\.[0-9]*)?)([eE][-+]?[0-9]+)?$)");
  if (std::regex_match(s, int_re)) {
    try {
      return std::stoll(s);
    } catch (const std::out_of_range&) {
      return s;
    }
  }
  if (std::regex_match(s, float_re)) return std::stod(s);
  return s;
}

inline json yaml_to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return scalar_to_json(n);
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : n) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : n) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return obj;
    }
  }
  return nullptr;
}

inline bool is_integer(const json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

inline std::optional<double> as_number(const json& v) {
  if (v.is_number()) return v.get<double>();
  return std::nullopt;
}

// Checks `value` against an argument spec; empty string means it fits.
inline std::string check_value(const ArgumentSpec& spec, const json& value) {
  switch (spec.kind) {
    case ArgKind::String:
      if (!value.is_string()) return "expected a string";
      return {};
    case ArgKind::Bool:
      if (!value.is_boolean()) return "expected a boolean";
      return {};
    case ArgKind::Categorical: {
      if (!value.is_string()) return "expected one of the choices";
      auto s = value.get<std::string>();
      for (const auto& c : spec.choices) {
        if (c == s) return {};
      }
      return "'" + s + "' is not one of the choices";
    }
    case ArgKind::Int:
    case ArgKind::Float: {
      if (spec.kind == ArgKind::Int && !is_integer(value)) return "expected an integer";
      if (spec.kind == ArgKind::Float && !value.is_number()) return "expected a number";
      double d = value.get<double>();
      if (!std::isfinite(d)) return "expected a finite number";
      std::ostringstream msg;
      if (spec.min && d < *spec.min) {
        msg << value.dump() << " is below the minimum " << json(*spec.min).dump();
        return msg.str();
      }
      if (spec.max && d > *spec.max) {
        msg << value.dump() << " is above the maximum " << json(*spec.max).dump();
        return msg.str();
      }
      return {};
    }
  }
  return {};
}

inline void parse_argument(const json& a, std::size_t pos, std::set<std::string>& seen, PluginManifest& m,
                           std::vector<Violation>& out) {
  std::string where = "arguments[" + std::to_string(pos) + "]";
  auto bad = [&](const std::string& why) { out.push_back({Errc::BadArgumentSpec, where + ": " + why}); };
  if (!a.is_object()) return bad("not a mapping");
  ArgumentSpec spec;
  if (!a.contains("name") || !a["name"].is_string() || a["name"].get<std::string>().empty()) {
    return bad("name must be a non-empty string");
  }
  spec.name = a["name"].get<std::string>();
  where += " (" + spec.name + ")";
  if (!seen.insert(spec.name).second) return bad("duplicate argument name");
  if (!a.contains("kind") || !a["kind"].is_string()) return bad("kind is required");
  auto kind = arg_kind_from_string(a["kind"].get<std::string>());
  if (!kind) return bad("unknown kind '" + a["kind"].get<std::string>() + "'");
  spec.kind = *kind;
  bool numeric = spec.kind == ArgKind::Int || spec.kind == ArgKind::Float;
  for (const char* bound : {"min", "max"}) {
    if (!a.contains(bound) || a[bound].is_null()) continue;
    if (!numeric) return bad(std::string(bound) + " applies to numeric kinds only");
    auto v = as_number(a[bound]);
    if (!v || !std::isfinite(*v)) return bad(std::string(bound) + " must be a number");
    (std::string(bound) == "min" ? spec.min : spec.max) = *v;
  }
  if (spec.min && spec.max && *spec.min > *spec.max) return bad("min exceeds max");
  if (a.contains("choices") && !a["choices"].is_null()) {
    if (spec.kind != ArgKind::Categorical) return bad("choices apply to categorical arguments only");
    if (!a["choices"].is_array()) return bad("choices must be a list");
    for (const auto& c : a["choices"]) {
      if (!c.is_string()) return bad("choices must be strings");
      spec.choices.push_back(c.get<std::string>());
    }
  }
  if (spec.kind == ArgKind::Categorical && spec.choices.empty()) return bad("categorical needs non-empty choices");
  if (!a.contains("default") || a["default"].is_null()) return bad("default is required");
  spec.default_value = a["default"];
  // floats may be written as integers
  if (spec.kind == ArgKind::Float && is_integer(spec.default_value)) {
    spec.default_value = spec.default_value.get<double>();
  }
  if (auto why = check_value(spec, spec.default_value); !why.empty()) return bad("default: " + why);
  m.arguments.push_back(std::move(spec));
}

}  // namespace detail

// Validates a decoded manifest object, collecting every violation.
inline PluginManifest manifest_from_json(const json& doc) {
  std::vector<Violation> v;
  PluginManifest m;
  if (!doc.is_object()) throw ManifestError({{Errc::BadType, "manifest must be a mapping"}});

  auto text_field = [&](const char* key, bool required, std::string& dst) {
    if (!doc.contains(key) || doc[key].is_null()) {
      if (required) v.push_back({Errc::MissingField, key});
      return false;
    }
    if (!doc[key].is_string()) {
      v.push_back({Errc::BadType, std::string(key) + " must be a string"});
      return false;
    }
    dst = doc[key].get<std::string>();
    if (required && dst.empty()) {
      v.push_back({Errc::MissingField, key});
      return false;
    }
    return true;
  };

  text_field("name", true, m.name);
  std::string type;
  if (text_field("type", true, type)) {
    if (auto t = plugin_type_from_string(type)) {
      m.type = *t;
    } else {
      v.push_back({Errc::BadType, "type must be summarizer or measure, got '" + type + "'"});
    }
  }
  if (text_field("version", true, m.version) && !is_semver(m.version)) {
    v.push_back({Errc::BadType, "version '" + m.version + "' is not semver"});
  }
  text_field("source", false, m.source);
  text_field("citation", false, m.citation);

  if (doc.contains("arguments") && !doc["arguments"].is_null()) {
    if (!doc["arguments"].is_array()) {
      v.push_back({Errc::BadArgumentSpec, "arguments must be a list"});
    } else {
      std::set<std::string> seen;
      for (std::size_t i = 0; i < doc["arguments"].size(); ++i) {
        detail::parse_argument(doc["arguments"][i], i, seen, m, v);
      }
    }
  }

  if (doc.contains("score_range") && !doc["score_range"].is_null()) {
    const json& r = doc["score_range"];
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number() ||
        r[0].get<double>() > r[1].get<double>()) {
      v.push_back({Errc::BadType, "score_range must be [low, high]"});
    } else {
      m.score_range = {r[0].get<double>(), r[1].get<double>()};
    }
  }

  if (doc.contains("corpus_level") && !doc["corpus_level"].is_null()) {
    if (!doc["corpus_level"].is_boolean()) {
      v.push_back({Errc::BadType, "corpus_level must be a boolean"});
    } else {
      m.corpus_level = doc["corpus_level"].get<bool>();
    }
  }

  if (!v.empty()) throw ManifestError(std::move(v));
  return m;
}

// YAML is the manifest file format; JSON (a YAML subset) parses too.
inline PluginManifest parse_manifest(const std::string& contents) {
  YAML::Node root;
  try {
    root = YAML::Load(contents);
  } catch (const YAML::Exception& e) {
    throw ManifestError({{Errc::FormatError, e.what()}});
  }
  if (!root.IsMap()) throw ManifestError({{Errc::BadType, "manifest must be a mapping"}});
  return manifest_from_json(detail::yaml_to_json(root));
}

inline PluginManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_manifest(contents);
}

// The /metadata body. score_range is only written when it is not [0, 1].
inline json to_json(const PluginManifest& m) {
  json args = json::array();
  for (const auto& a : m.arguments) {
    json j = {{"name", a.name}, {"kind", to_string(a.kind)}, {"default", a.default_value}};
    if (a.kind == ArgKind::Categorical) j["choices"] = a.choices;
    auto bound = [&](double b) { return a.kind == ArgKind::Int ? json(static_cast<long long>(b)) : json(b); };
    if (a.min) j["min"] = bound(*a.min);
    if (a.max) j["max"] = bound(*a.max);
    args.push_back(std::move(j));
  }
  json out = {{"name", m.name},     {"type", to_string(m.type)},   {"version", m.version},
              {"source", m.source}, {"citation", m.citation},      {"arguments", std::move(args)}};
  if (m.score_range != ScoreRange{}) out["score_range"] = {m.score_range.lo, m.score_range.hi};
  if (m.corpus_level) out["corpus_level"] = true;
  return out;
}

namespace detail {

inline void emit_json(YAML::Emitter& out, const json& v) {
  if (v.is_object()) {
    out << YAML::BeginMap;
    for (auto it = v.begin(); it != v.end(); ++it) {
      out << YAML::Key << it.key() << YAML::Value;
      emit_json(out, it.value());
    }
    out << YAML::EndMap;
  } else if (v.is_array()) {
    out << YAML::BeginSeq;
    for (const auto& item : v) emit_json(out, item);
    out << YAML::EndSeq;
  } else if (v.is_string()) {
    out << YAML::DoubleQuoted << v.get<std::string>();
  } else if (v.is_null()) {
    out << YAML::Null;
  } else {
    // shortest round-trip spelling of numbers and booleans
    out << v.dump();
  }
}

}  // namespace detail

inline std::string to_yaml(const PluginManifest& m) {
  YAML::Emitter out;
  detail::emit_json(out, to_json(m));
  return std::string(out.c_str()) + "\n";
}

// Fills defaults and checks every supplied argument against the manifest.
inline json resolve_arguments(const PluginManifest& m, const json& supplied) {
  std::vector<std::string> errors;
  json out = json::object();
  if (!supplied.is_null() && !supplied.is_object()) {
    throw ArgumentError({"arguments must be an object"});
  }
  for (const auto& spec : m.arguments) out[spec.name] = spec.default_value;
  if (supplied.is_object()) {
    for (auto it = supplied.begin(); it != supplied.end(); ++it) {
      const ArgumentSpec* spec = m.argument(it.key());
      if (spec == nullptr) {
        errors.push_back(it.key() + ": unknown argument");
        continue;
      }
      json value = it.value();
      if (spec->kind == ArgKind::Float && detail::is_integer(value)) value = value.get<double>();
      if (auto why = detail::check_value(*spec, value); !why.empty()) {
        errors.push_back(it.key() + ": " + why);
        continue;
      }
      out[it.key()] = std::move(value);
    }
  }
  if (!errors.empty()) throw ArgumentError(std::move(errors));
  return out;
}

}  // namespace swb::plugin
