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
#ifndef HLMAX_SUITE_HPP
#define HLMAX_SUITE_HPP

// Manifest-driven verification suite. A manifest names explicit instances
// and/or a seeded batch of random ones; every instance runs the full check
// pipeline and the report is a deterministic function of the manifest.
//
//   {"seed": 1,
//    "random": {"count": 50, "max_points": 32, "p": [1.2, 2],
//               "phi": ["power:p'", "power:2p'", "powerlog:p':1"]},
//    "instances": [{"name": "...", "space": {...}, "w": ..., "sigma": ...,
//                   "p": [2], "phi": ["power:2"]}],
//    "opnorm": {"random": true, "samples": 16, "coordinate_ascent": false},
//    "probes": true}

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hlmax/czdecomp.hpp"
#include "hlmax/errors.hpp"
#include "hlmax/io.hpp"
#include "hlmax/random.hpp"
#include "hlmax/space.hpp"
#include "hlmax/verify.hpp"
#include "hlmax/weights.hpp"

namespace hlmax {

struct SuiteInstance {
  std::string name;
  QuasiMetricSpace space;
  WeightVector w;
  WeightVector sigma;
  std::vector<double> p;
  std::vector<std::string> phi;  // tokens, possibly in terms of p and p'
};

struct SuiteOptions {
  OpNormStrategies opnorm;
  bool probes = true;
};

struct SuiteReport {
  io::Json json;
  std::size_t violations = 0;
};

namespace detail {

// "2p'" -> 2 p', "p" -> p, "1.5" -> 1.5.
inline double resolve_exponent(const std::string& token, double p, const std::string& where) {
  std::string coefficient = token;
  double unit = 1.0;
  if (token.size() >= 2 && token.compare(token.size() - 2, 2, "p'") == 0) {
    coefficient = token.substr(0, token.size() - 2);
    unit = p / (p - 1.0);
  } else if (!token.empty() && token.back() == 'p') {
    coefficient = token.substr(0, token.size() - 1);
    unit = p;
  } else {
    unit = 1.0;
  }
  if (coefficient.empty()) return unit;
  std::size_t used = 0;
  double c = 0.0;
  try {
    c = std::stod(coefficient, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != coefficient.size() || !std::isfinite(c)) {
    throw InputError(where + ": cannot read exponent '" + token + "'");
  }
  return c * unit;
}

}  // namespace detail

/// Resolves a Young-function token at exponent p, e.g. "powerlog:p':1".
inline YoungFunction resolve_phi(const std::string& token, double p, const std::string& where = "phi") {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= token.size(); ++i) {
    if (i == token.size() || token[i] == ':') {
      parts.push_back(token.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() == 2 && parts[0] == "power") {
    return io::parse_phi(io::Json{{"family", "power"}, {"s", detail::resolve_exponent(parts[1], p, where)}},
                         where);
  }
  if (parts.size() == 3 && parts[0] == "powerlog") {
    return io::parse_phi(io::Json{{"family", "powerlog"},
                                  {"s", detail::resolve_exponent(parts[1], p, where)},
                                  {"a", detail::resolve_exponent(parts[2], p, where)}},
                         where);
  }
  throw InputError(where + ": expected power:s or powerlog:s:a, got '" + token + "'");
}

/// Runs every check on one instance. Probes whose constants are unspecified
/// are reported but never counted as violations.
inline io::Json run_instance(const SuiteInstance& instance, const SuiteOptions& options, std::uint64_t seed,
                             std::size_t& violation_count) {
  using io::Json;
  using io::to_json;
  Rng rng(seed);
  std::vector<Violation> violations;
  const BallIndex index(instance.space);
  const SpaceProfile profile = space_profile(index);
  const CZConfig config = make_cz_config(profile);

  Json out;
  out["name"] = instance.name;
  out["seed"] = seed;
  out["points"] = instance.space.size();
  out["canonical_balls"] = index.size();
  out["distinct_balls"] = index.distinct().size();
  out["profile"] = to_json(profile);
  out["config"] = to_json(config);

  for (auto& v : check_engulfing(index, profile)) violations.push_back(std::move(v));
  const std::vector<double> lambdas{2.0, profile.engulf, config.theta, config.eta};
  for (auto& v : check_dilation_bound(index, profile, lambdas)) violations.push_back(std::move(v));

  Json per_p = Json::array();
  for (double pv : instance.p) {
    const LebesgueExponent p(pv);
    Json entry;
    entry["p"] = pv;
    const ReductionReport reductions = verify_reductions(index, instance.w, instance.sigma, p);
    if (!reductions.pass) {
      violations.push_back({"reduction", "p=" + std::to_string(pv) + " bump error " +
                                             std::to_string(reductions.bump_error) + ", wp error " +
                                             std::to_string(reductions.wp_error)});
    }
    entry["reductions"] = to_json(reductions);

    Json chains = Json::array();
    for (const auto& token : instance.phi) {
      const YoungFunction phi = resolve_phi(token, pv);
      const ChainReport chain = verify_main_chain(index, profile, instance.w, instance.sigma, p, phi, config);
      Json c = to_json(chain);
      if (!chain.pass) {
        violations.push_back({"chain", phi.describe() + " at p=" + std::to_string(pv) + " slack " +
                                           std::to_string(chain.slack)});
      }
      // Both sides are linear in w, so the slack must not move.
      const WeightVector scaled = instance.w.scaled(3.5);
      const double scaled_slack = std::pow(sawyer_constant(index, scaled, instance.sigma, p), pv) /
                                  (chain.constant * bump_ap(index, scaled, instance.sigma, p, phi) * chain.wp);
      c["scaled_slack_error"] = relative_error(scaled_slack, chain.slack);
      if (relative_error(scaled_slack, chain.slack) > kIdentityTolerance) {
        violations.push_back({"chain-scaling", phi.describe() + " slack moved under w -> 3.5 w"});
      }
      chains.push_back(std::move(c));
    }
    entry["chains"] = std::move(chains);

    OpNormStrategies strategies = options.opnorm;
    strategies.seed = rng();
    const OpNormEstimate estimate = opnorm_lower_bound(index, instance.w, instance.sigma, p, strategies);
    const double sawyer = sawyer_constant(index, instance.w, instance.sigma, p);
    entry["sawyer"] = sawyer;
    entry["opnorm"] = to_json(estimate);
    if (sawyer > estimate.value + kIdentityTolerance * std::max(1.0, estimate.value)) {
      violations.push_back({"sawyer-ordering", "p=" + std::to_string(pv) + " sawyer " + std::to_string(sawyer) +
                                                   " exceeds opnorm lower bound " + std::to_string(estimate.value)});
    }
    const auto replay = opnorm_ratio(index, instance.w, instance.sigma, p, estimate.witness);
    if (!replay || relative_error(*replay, estimate.value) > kIdentityTolerance) {
      violations.push_back({"witness-replay", "p=" + std::to_string(pv)});
    }
    if (options.probes) {
      entry["moen"] = to_json(probe_moen_and_norm(index, instance.w, instance.sigma, p, rng()));
      entry["appendix_bump"] = to_json(verify_appendix_bump(index, instance.w, instance.sigma, p, 2.0));
    }
    per_p.push_back(std::move(entry));
  }
  out["exponents"] = std::move(per_p);

  Json rhi = Json::object();
  for (const auto& [label, weight] : {std::pair{"w", &instance.w}, std::pair{"sigma", &instance.sigma}}) {
    if (!weight->strictly_positive()) continue;
    const RHIProbeReport probe = weak_rhi_probe(index, profile, *weight);
    if (!probe.found) violations.push_back({"reverse-hoelder", std::string(label) + ": no r > 1 found"});
    rhi[label] = to_json(probe);
  }
  out["reverse_hoelder"] = std::move(rhi);

  // Stopping-time checks on f = sigma 1_B for a random ball carrying sigma mass.
  std::vector<std::size_t> carriers;
  for (std::size_t i : index.distinct()) {
    for (std::size_t y : index.members(i)) {
      if (instance.sigma[y] > 0.0) {
        carriers.push_back(i);
        break;
      }
    }
  }
  if (!carriers.empty()) {
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, carriers.size() - 1)(rng);
    const Ball base = index[carriers[pick]].ball;
    std::vector<double> fv(instance.space.size(), 0.0);
    for (std::size_t y : index.members(carriers[pick])) fv[y] = instance.sigma[y];
    const FieldVector f(std::move(fv));
    std::vector<std::size_t> all(instance.space.size());
    for (std::size_t y = 0; y < all.size(); ++y) all[y] = y;
    const double floor = std::max(detail::average_on(instance.space, f, base),
                                  detail::average_on(instance.space, f, all));
    const double lambda = floor * std::uniform_real_distribution<double>(1.0, 4.0)(rng);
    const CZDecomposition dec = cz_decompose(index, base, f, lambda, config);
    const CZCheckReport single = verify_cz_properties(index, dec, f, config);
    for (const auto& v : single.violations) violations.push_back(v);
    const LevelFamily family = multi_level_decompose(index, base, f, config);
    for (auto& v : verify_disjointing(index, family, config)) violations.push_back(std::move(v));
    out["cz"] = Json{{"base", to_json(base)},
                     {"lambda", lambda},
                     {"selected", dec.selected.size()},
                     {"undilated_exceedances", single.undilated_exceedances},
                     {"levels", family.levels.size()},
                     {"k0", family.k0}};
  }

  violation_count += violations.size();
  out["violations"] = to_json(violations);
  return out;
}

struct PlannedInstance {
  SuiteInstance instance;
  std::uint64_t seed = 0;  // drives the instance's own randomized steps
};

struct SuitePlan {
  std::uint64_t seed = 0;
  SuiteOptions options;
  std::vector<PlannedInstance> instances;
};

/// Validates a manifest and materializes every instance it names. Explicit
/// instances come first, then the random batch, all drawn from one
/// generator seeded by the manifest (or by `seed_override`).
inline SuitePlan plan_suite(const io::Json& manifest, std::optional<std::uint64_t> seed_override = std::nullopt) {
  using io::Json;
  namespace d = io::detail;
  if (!manifest.is_object()) throw InputError("manifest: expected an object");
  SuitePlan plan;
  if (manifest.contains("seed")) plan.seed = d::count(manifest["seed"], "manifest.seed");
  if (seed_override) plan.seed = *seed_override;

  const auto flag = [](const Json& j, const std::string& where) {
    if (!j.is_boolean()) throw InputError(where + ": expected true or false");
    return j.get<bool>();
  };
  if (manifest.contains("opnorm")) {
    const Json& o = manifest["opnorm"];
    if (!o.is_object()) throw InputError("manifest.opnorm: expected an object");
    if (o.contains("random")) plan.options.opnorm.random = flag(o["random"], "manifest.opnorm.random");
    if (o.contains("coordinate_ascent")) {
      plan.options.opnorm.coordinate_ascent = flag(o["coordinate_ascent"], "manifest.opnorm.coordinate_ascent");
    }
    if (o.contains("samples")) plan.options.opnorm.random_samples = d::count(o["samples"], "manifest.opnorm.samples");
  }
  if (manifest.contains("probes")) plan.options.probes = flag(manifest["probes"], "manifest.probes");

  const auto string_list = [](const Json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(d::text(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
  };
  const auto exponent_list = [](const Json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": expected an array");
    if (j.empty()) throw InputError(where + ": empty");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string at = where + "[" + std::to_string(i) + "]";
      out.push_back(d::number(j[i], at));
      d::located(at, [&] { return LebesgueExponent(out.back()); });
    }
    return out;
  };
  const auto check_phis = [](const std::vector<double>& ps, const std::vector<std::string>& phis,
                             const std::string& where) {
    for (double pv : ps) {
      for (std::size_t i = 0; i < phis.size(); ++i) resolve_phi(phis[i], pv, where + "[" + std::to_string(i) + "]");
    }
  };

  Rng master(plan.seed);
  if (manifest.contains("instances")) {
    const Json& list = manifest["instances"];
    if (!list.is_array()) throw InputError("manifest.instances: expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "manifest.instances[" + std::to_string(i) + "]";
      const Json& spec = list[i];
      const QuasiMetricSpace space = io::parse_space(d::field(spec, "space", where), where + ".space");
      SuiteInstance instance{
          spec.contains("name") ? d::text(spec["name"], where + ".name") : "instance-" + std::to_string(i),
          space,
          io::parse_weight(d::field(spec, "w", where), space, where + ".w"),
          io::parse_weight(d::field(spec, "sigma", where), space, where + ".sigma"),
          exponent_list(d::field(spec, "p", where), where + ".p"),
          string_list(d::field(spec, "phi", where), where + ".phi")};
      check_phis(instance.p, instance.phi, where + ".phi");
      plan.instances.push_back({std::move(instance), master()});
    }
  }

  if (manifest.contains("random")) {
    const Json& r = manifest["random"];
    const std::size_t n = d::count(d::field(r, "count", "manifest.random"), "manifest.random.count");
    const std::size_t max_points = r.contains("max_points") ? d::count(r["max_points"], "manifest.random.max_points") : 32;
    if (max_points == 0) throw InputError("manifest.random.max_points: must be positive");
    const auto ps = exponent_list(d::field(r, "p", "manifest.random"), "manifest.random.p");
    const auto phis = string_list(d::field(r, "phi", "manifest.random"), "manifest.random.phi");
    check_phis(ps, phis, "manifest.random.phi");
    for (std::size_t i = 0; i < n; ++i) {
      Rng local(master());
      GeneratedSpace generated = random_space(local, max_points);
      WeightVector w = random_weight(local, generated.space, true);
      WeightVector sigma = random_weight(local, generated.space, true);
      SuiteInstance instance{"random-" + std::to_string(i) + "-" + generated.kind, std::move(generated.space),
                             std::move(w), std::move(sigma), {ps[i % ps.size()]}, phis};
      plan.instances.push_back({std::move(instance), local()});
    }
  }
  return plan;
}

/// Parses a manifest and runs it. Throws InputError on malformed manifests.
inline SuiteReport run_suite(const io::Json& manifest, std::optional<std::uint64_t> seed_override = std::nullopt) {
  const SuitePlan plan = plan_suite(manifest, seed_override);
  io::Json results = io::Json::array();
  std::size_t violations = 0;
  for (const auto& planned : plan.instances) {
    results.push_back(run_instance(planned.instance, plan.options, planned.seed, violations));
  }
  SuiteReport report;
  report.violations = violations;
  report.json = io::Json{{"seed", plan.seed},
                         {"instances", plan.instances.size()},
                         {"violations", violations},
                         {"results", std::move(results)}};
  return report;
}

}  // namespace hlmax

#endif  // HLMAX_SUITE_HPP
