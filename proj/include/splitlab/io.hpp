#pragma once

// JSON problem documents and CSV rate tables.
//
// Problem schema:
//   {"f": {"name": ..., "params": {...}}, "g": {...}, "h": {...} (optional),
//    "alpha": <real>, "x0": [...], "u0": [...]}
// Parameter values are numbers or arrays of numbers.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "splitlab/errors.hpp"
#include "splitlab/functions.hpp"
#include "splitlab/solvers.hpp"
#include "splitlab/worstcase.hpp"

namespace splitlab {

using Json = nlohmann::json;

/// 17 significant digits, enough to round-trip any double.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline const Json& require_field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key, "missing field");
  return *it;
}

inline double parse_real(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path, "expected a number");
  return v.get<double>();
}

inline std::vector<double> parse_real_list(const Json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ParseError(path, "expected a number or an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_real(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline DenseVector parse_vector(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array of numbers");
  auto values = parse_real_list(v, path);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i])) throw ParseError(path + "[" + std::to_string(i) + "]", "value is not finite");
  return DenseVector(std::move(values));
}

inline ParamMap parse_params(const Json& fnode, const std::string& path) {
  ParamMap params;
  auto it = fnode.find("params");
  if (it == fnode.end() || it->is_null()) return params;
  if (!it->is_object()) throw ParseError(path + ".params", "expected an object");
  for (const auto& [key, value] : it->items()) params[key] = parse_real_list(value, path + ".params." + key);
  return params;
}

inline std::string parse_name(const Json& fnode, const std::string& path) {
  if (!fnode.is_object()) throw ParseError(path, "expected an object with a name");
  const Json& name = require_field(fnode, "name", path);
  if (!name.is_string()) throw ParseError(path + ".name", "expected a string");
  return name.get<std::string>();
}

template <typename Make>
auto parse_function(const Json& doc, const std::string& key, Make make) {
  const std::string path = "$." + key;
  const Json& node = require_field(doc, key, "$");
  const std::string name = parse_name(node, path);
  ParamMap params = parse_params(node, path);
  try {
    return make(name, params);
  } catch (const ConfigError& e) {
    throw ParseError(path, e.what());
  }
}

inline Json params_to_json(const ParamMap& params) {
  Json obj = Json::object();
  for (const auto& [key, values] : params) {
    if (values.size() == 1)
      obj[key] = values[0];
    else
      obj[key] = values;
  }
  return obj;
}

}  // namespace detail

/// Parses a problem document. With `algorithms` non-empty, each algorithm's
/// requirements (h = 0 for DRS, alpha = 1/L for DYS) are checked as well.
/// Schema problems raise ParseError; semantic problems raise ConfigError or ArgumentError.
inline ProblemInstance parse_problem_spec(const Json& doc, std::span<const Algorithm> algorithms = {}) {
  if (!doc.is_object()) throw ParseError("$", "expected a JSON object");
  ProblemInstance inst;
  inst.f = detail::parse_function(doc, "f", [](const std::string& n, const ParamMap& p) {
    return make_prox_function(n, p);
  });
  inst.g = detail::parse_function(doc, "g", [](const std::string& n, const ParamMap& p) {
    return make_prox_function(n, p);
  });
  if (doc.contains("h") && !doc["h"].is_null()) {
    inst.h = detail::parse_function(doc, "h", [](const std::string& n, const ParamMap& p) {
      return make_smooth_function(n, p);
    });
  }
  inst.alpha = detail::parse_real(detail::require_field(doc, "alpha", "$"), "$.alpha");
  inst.x0 = detail::parse_vector(detail::require_field(doc, "x0", "$"), "$.x0");
  inst.u0 = detail::parse_vector(detail::require_field(doc, "u0", "$"), "$.u0");
  inst.validate();
  for (Algorithm a : algorithms) inst.validate_for(a);
  return inst;
}

inline ProblemInstance parse_problem_spec(const std::string& text, std::span<const Algorithm> algorithms = {}) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_problem_spec(doc, algorithms);
}

inline ProblemInstance parse_problem_spec(const char* text, std::span<const Algorithm> algorithms = {}) {
  return parse_problem_spec(std::string(text), algorithms);
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ParseError("$", "invalid JSON in '" + path + "': " + e.what());
  }
}

inline Json to_json(const DenseVector& v) { return Json(v.raw()); }

inline Json problem_to_json(const ProblemInstance& inst) {
  Json doc;
  doc["f"] = {{"name", std::string(inst.f.name())}, {"params", detail::params_to_json(inst.f.params())}};
  doc["g"] = {{"name", std::string(inst.g.name())}, {"params", detail::params_to_json(inst.g.params())}};
  if (!inst.h.is_zero()) doc["h"] = {{"name", std::string(inst.h.name())}, {"params", detail::params_to_json(inst.h.params())}};
  doc["alpha"] = inst.alpha;
  doc["x0"] = to_json(inst.x0);
  doc["u0"] = to_json(inst.u0);
  return doc;
}

/// Structural equality: same catalogue entries, parameters, step and starting point.
inline bool same_problem(const ProblemInstance& a, const ProblemInstance& b) {
  return a.f.name() == b.f.name() && a.f.params() == b.f.params() && a.g.name() == b.g.name() &&
         a.g.params() == b.g.params() && a.h.name() == b.h.name() && a.h.params() == b.h.params() &&
         a.alpha == b.alpha && a.x0 == b.x0 && a.u0 == b.u0;
}

/// Problem document plus an "expected" block with the closed-form trajectory.
inline Json bundle_to_json(const WorstCaseBundle& b) {
  Json doc = problem_to_json(b.instance);
  Json xs = Json::array(), us = Json::array();
  for (const auto& x : b.expected_x) xs.push_back(to_json(x));
  for (const auto& u : b.expected_u) us.push_back(to_json(u));
  doc["expected"] = {{"algorithm", std::string(to_string(b.algorithm))},
                     {"kind", std::string(to_string(b.kind))},
                     {"K", b.K},
                     {"x", xs},
                     {"u", us},
                     {"ergodic_x", to_json(b.expected_ergodic_x)},
                     {"ergodic_u", to_json(b.expected_ergodic_u)},
                     {"gap", b.expected_gap},
                     {"reference", {{"x", to_json(b.reference.x_ref)}, {"u", to_json(b.reference.u_ref)}}}};
  return doc;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kCsvHeader = "algorithm,K,alpha,gap,bound,ratio,residual,sign_pass,wall_ms";

struct CsvRow {
  std::string algorithm;
  std::size_t K = 0;
  double alpha = 0.0;
  double gap = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  double residual = 0.0;
  bool sign_pass = false;
  double wall_ms = 0.0;
};

inline std::string format_csv_row(const CsvRow& r) {
  std::string line = r.algorithm;
  line += ',' + std::to_string(r.K);
  for (double v : {r.alpha, r.gap, r.bound, r.ratio, r.residual}) line += ',' + format_real(v);
  line += r.sign_pass ? ",true," : ",false,";
  line += format_real(r.wall_ms);
  line += '\n';
  return line;
}

inline std::string format_csv(const std::vector<CsvRow>& rows) {
  std::string out = std::string(kCsvHeader) + '\n';
  for (const auto& r : rows) out += format_csv_row(r);
  return out;
}

}  // namespace splitlab
