// Copyright 2026 The hlmax Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef HLMAX_IO_HPP
#define HLMAX_IO_HPP

// JSON readers for space, weight and Young-function specs, and writers for
// every report type. Reader errors are InputError with the offending field
// named in the message.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hlmax/czdecomp.hpp"
#include "hlmax/errors.hpp"
#include "hlmax/orlicz.hpp"
#include "hlmax/space.hpp"
#include "hlmax/verify.hpp"
#include "hlmax/weights.hpp"

namespace hlmax::io {

using Json = nlohmann::ordered_json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

namespace detail {

inline const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(where + "." + key + ": missing");
  return *it;
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw InputError(where + ": not finite");
  return x;
}

inline double nonnegative(const Json& j, const std::string& where) {
  const double x = number(j, where);
  if (x < 0.0) throw InputError(where + ": negative value");
  return x;
}

inline std::vector<double> nonnegative_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(nonnegative(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

inline std::size_t count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw InputError(where + ": expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

// Re-throws library validation errors with the spec location prefixed.
template <typename F>
auto located(const std::string& where, F&& make) {
  try {
    return make();
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

}  // namespace detail

/// {"type":"grid","shape":[n] | [n,m],"metric":"l1"|"linf"|"l2","mass":"uniform" | [...]}
/// or {"type":"explicit","dist":[[...]],"mass":[...]}.
inline QuasiMetricSpace parse_space(const Json& j, const std::string& where = "space") {
  const std::string type = detail::text(detail::field(j, "type", where), where + ".type");
  if (type == "grid") {
    const Json& shape_json = detail::field(j, "shape", where);
    if (!shape_json.is_array()) throw InputError(where + ".shape: expected an array");
    std::vector<std::size_t> shape;
    for (std::size_t i = 0; i < shape_json.size(); ++i) {
      shape.push_back(detail::count(shape_json[i], where + ".shape[" + std::to_string(i) + "]"));
    }
    GridMetric metric = GridMetric::l1;
    if (j.contains("metric")) {
      const std::string m = detail::text(j["metric"], where + ".metric");
      if (m == "l1") {
        metric = GridMetric::l1;
      } else if (m == "linf") {
        metric = GridMetric::linf;
      } else if (m == "l2") {
        metric = GridMetric::l2;
      } else {
        throw InputError(where + ".metric: unknown metric '" + m + "'");
      }
    }
    std::vector<double> mass;
    if (j.contains("mass") && !(j["mass"].is_string() && j["mass"] == "uniform")) {
      mass = detail::nonnegative_array(j["mass"], where + ".mass");
    }
    return detail::located(where, [&] { return QuasiMetricSpace::grid(shape, metric, mass); });
  }
  if (type == "explicit") {
    const Json& dist_json = detail::field(j, "dist", where);
    if (!dist_json.is_array()) throw InputError(where + ".dist: expected an array of rows");
    std::vector<std::vector<double>> dist;
    for (std::size_t i = 0; i < dist_json.size(); ++i) {
      dist.push_back(detail::nonnegative_array(dist_json[i], where + ".dist[" + std::to_string(i) + "]"));
    }
    auto mass = detail::nonnegative_array(detail::field(j, "mass", where), where + ".mass");
    return detail::located(where, [&] { return QuasiMetricSpace::from_matrix(dist, std::move(mass)); });
  }
  throw InputError(where + ".type: unknown space type '" + type + "'");
}

/// A bare array, {"type":"array","values":[...]}, or
/// {"type":"power","alpha":a,"center":i,"offset":d} meaning (d(center,y)+d)^a.
inline std::vector<double> parse_values(const Json& j, const QuasiMetricSpace& space,
                                        const std::string& where) {
  std::vector<double> values;
  if (j.is_array()) {
    values = detail::nonnegative_array(j, where);
  } else {
    const std::string type = detail::text(detail::field(j, "type", where), where + ".type");
    if (type == "array") {
      values = detail::nonnegative_array(detail::field(j, "values", where), where + ".values");
    } else if (type == "power") {
      const double alpha = detail::number(detail::field(j, "alpha", where), where + ".alpha");
      const std::size_t center = detail::count(detail::field(j, "center", where), where + ".center");
      const double offset = j.contains("offset") ? detail::nonnegative(j["offset"], where + ".offset") : 0.0;
      if (center >= space.size()) throw InputError(where + ".center: outside the space");
      if (alpha < 0.0 && !(offset > 0.0)) {
        throw InputError(where + ".offset: must be positive when alpha < 0");
      }
      values.resize(space.size());
      for (std::size_t y = 0; y < space.size(); ++y) {
        values[y] = std::pow(space.distance(center, y) + offset, alpha);
      }
    } else {
      throw InputError(where + ".type: unknown weight type '" + type + "'");
    }
  }
  if (values.size() != space.size()) {
    throw InputError(where + ": length " + std::to_string(values.size()) + " does not match space size " +
                     std::to_string(space.size()));
  }
  return values;
}

inline WeightVector parse_weight(const Json& j, const QuasiMetricSpace& space,
                                 const std::string& where = "weight") {
  auto values = parse_values(j, space, where);
  return detail::located(where, [&] { return WeightVector(std::move(values)); });
}

inline FieldVector parse_field(const Json& j, const QuasiMetricSpace& space,
                               const std::string& where = "f") {
  return FieldVector(parse_values(j, space, where));
}

/// "power:s", "powerlog:s:a", {"family":"power","s":s} or
/// {"family":"powerlog","s":s,"a":a}; s > 1 in every form.
inline YoungFunction parse_phi(const Json& j, const std::string& where = "phi") {
  std::string family;
  double s = 0.0;
  double a = 0.0;
  if (j.is_string()) {
    std::vector<std::string> parts;
    std::stringstream ss(j.get<std::string>());
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    const auto parse = [&](const std::string& token, const std::string& name) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || token.empty() || !std::isfinite(x)) {
        throw InputError(where + "." + name + ": not a number '" + token + "'");
      }
      return x;
    };
    if (parts.size() == 2 && parts[0] == "power") {
      family = "power";
      s = parse(parts[1], "s");
    } else if (parts.size() == 3 && parts[0] == "powerlog") {
      family = "powerlog";
      s = parse(parts[1], "s");
      a = parse(parts[2], "a");
    } else {
      throw InputError(where + ": expected power:s or powerlog:s:a, got '" + j.get<std::string>() + "'");
    }
  } else {
    family = detail::text(detail::field(j, "family", where), where + ".family");
    s = detail::number(detail::field(j, "s", where), where + ".s");
    if (family == "powerlog") a = detail::number(detail::field(j, "a", where), where + ".a");
  }
  if (!(s > 1.0)) throw InputError(where + ".s: must exceed 1");
  if (family == "power") return YoungFunction::power(s);
  if (family == "powerlog") {
    if (!(a >= 0.0)) throw InputError(where + ".a: must be nonnegative");
    return YoungFunction::power_log(s, a);
  }
  throw InputError(where + ".family: unknown family '" + family + "'");
}

// ---------------------------------------------------------------- writers

inline Json to_json(const Violation& v) { return Json{{"check", v.check}, {"detail", v.detail}}; }

inline Json to_json(const std::vector<Violation>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

inline Json to_json(const Ball& b) { return Json{{"center", b.center}, {"radius", b.radius}}; }

inline Json to_json(const SpaceProfile& p) {
  return Json{{"kappa", p.kappa}, {"c_mu", p.c_mu}, {"d_mu", p.d_mu}, {"engulf", p.engulf}};
}

inline Json to_json(const CZConfig& c) {
  return Json{{"kappa", c.kappa}, {"d_mu", c.doubling_order}, {"theta", c.theta},
              {"eta", c.eta},     {"a", c.a},                  {"required_a", c.required_a()}};
}

inline Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

inline Json to_json(const ConstantsReport& r) {
  return Json{{"p", r.p},
              {"phi", r.phi},
              {"phi_conjugate", r.phi_conjugate},
              {"ap", optional_number(r.ap)},
              {"two_weight_ap", r.two_weight_ap},
              {"ainfty_fw", r.ainfty_fw},
              {"ainfty_exp", optional_number(r.ainfty_exp)},
              {"bump_ap", r.bump_ap},
              {"wp", r.wp},
              {"sawyer", r.sawyer}};
}

inline Json to_json(const ChainReport& r) {
  return Json{{"p", r.p},         {"phi", r.phi},           {"a", r.a},
              {"sawyer_p", r.sawyer_p}, {"bump", r.bump},   {"wp", r.wp},
              {"constant", r.constant}, {"bound", r.bound}, {"slack", r.slack},
              {"pass", r.pass}};
}

inline Json to_json(const ReductionReport& r) {
  return Json{{"bump_power_pconj", r.bump_power_pconj},
              {"two_weight_ap", r.two_weight_ap},
              {"wp_power_p", r.wp_power_p},
              {"ainfty_fw", r.ainfty_fw},
              {"bump_error", r.bump_error},
              {"wp_error", r.wp_error},
              {"pass", r.pass}};
}

inline Json to_json(const OpNormEstimate& e) {
  return Json{{"value", e.value},
              {"witness", e.witness},
              {"strategies", e.strategies},
              {"evaluations", e.evaluations}};
}

inline Json to_json(const MoenProbe& m) {
  Json rows = Json::array();
  for (const auto& row : m.unweighted) {
    rows.push_back(Json{{"q", row.q}, {"ratio", row.ratio}, {"q_conjugate", row.q_conjugate}});
  }
  return Json{{"opnorm", m.opnorm}, {"sawyer", m.sawyer}, {"p_conjugate", m.p_conjugate},
              {"ratio", m.ratio},   {"unweighted", rows}};
}

inline Json to_json(const RHIProbeReport& r) {
  return Json{{"r_star", r.r_star}, {"r_max", r.r_max},
              {"factor", r.factor}, {"ainfty", r.ainfty},
              {"tau_estimate", r.tau_estimate}, {"found", r.found}};
}

inline Json to_json(const TailIntegral& t) {
  return Json{{"divergent", t.divergent},
              {"value", t.divergent ? Json(nullptr) : Json(t.value)},
              {"tail_bound", t.tail_bound}};
}

inline Json to_json(const AppendixBumpReport& r) {
  return Json{{"r", r.r},
              {"exponent", r.exponent},
              {"conjugate_exponent", r.conjugate_exponent},
              {"bump", r.bump},
              {"alpha", to_json(r.alpha)},
              {"certificate", std::isfinite(r.certificate) ? Json(r.certificate) : Json(nullptr)}};
}

inline Json to_json(const CZDecomposition& d) {
  Json balls = Json::array();
  for (const auto& s : d.selected) {
    balls.push_back(Json{{"center", s.ball.center},
                         {"radius", s.ball.radius},
                         {"members", s.members},
                         {"measure", s.measure},
                         {"average", s.average}});
  }
  return Json{{"lambda", d.level},
              {"base", to_json(d.base_ball)},
              {"omega", d.omega},
              {"omega_in_base", d.omega_in_base},
              {"balls", balls}};
}

inline Json to_json(const LevelFamily& f) {
  Json levels = Json::array();
  for (const auto& level : f.levels) {
    Json entry = to_json(level.decomposition);
    entry["k"] = level.k;
    entry["e_sets"] = level.e_sets;
    levels.push_back(std::move(entry));
  }
  return Json{{"base", to_json(f.base_ball)},
              {"a", f.a},
              {"base_average", f.base_average},
              {"k0", f.k0},
              {"levels", levels}};
}

}  // namespace hlmax::io

#endif  // HLMAX_IO_HPP
