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
// hlmax: command-line front end. Reports are JSON (or CSV tables) on stdout
// or in --out. Exit status: 0 clean, 1 a checker reported a violation,
// 2 bad input.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hlmax.hpp"

namespace {

using hlmax::io::Json;

struct Options {
  std::string space;
  std::string w;
  std::string sigma;
  std::string f;
  std::vector<double> p{2.0};
  std::string phi = "power:2";
  std::optional<double> lambda;
  std::optional<double> a;
  std::optional<double> eta;
  bool allow_small_a = false;
  std::optional<std::size_t> base_center;
  std::optional<double> base_radius;
  std::string strategies = "indicators";
  std::size_t samples = 64;
  std::string manifest;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
};

// Arguments that look like JSON are parsed inline, anything else is a path.
Json load(const std::string& argument, const std::string& flag) {
  if (argument.empty()) throw hlmax::InputError(flag + ": required");
  const auto first = argument.find_first_not_of(" \t");
  if (first != std::string::npos && (argument[first] == '[' || argument[first] == '{')) {
    try {
      return Json::parse(argument);
    } catch (const Json::parse_error& e) {
      throw hlmax::InputError(flag + ": malformed JSON: " + e.what());
    }
  }
  return hlmax::io::read_json_file(argument);
}

hlmax::YoungFunction load_phi(const std::string& argument) {
  if (argument.rfind("power", 0) == 0) return hlmax::io::parse_phi(Json(argument), "--phi");
  return hlmax::io::parse_phi(load(argument, "--phi"), "--phi");
}

hlmax::Ball base_ball(const hlmax::QuasiMetricSpace& space, const Options& o) {
  const std::size_t center = o.base_center.value_or(0);
  if (center >= space.size()) throw hlmax::InputError("--base-center: outside the space");
  if (o.base_radius) {
    if (!(*o.base_radius > 0.0)) throw hlmax::InputError("--base-radius: must be positive");
    return hlmax::Ball{center, *o.base_radius};
  }
  double far = 0.0;
  for (std::size_t y = 0; y < space.size(); ++y) far = std::max(far, space.distance(center, y));
  return hlmax::Ball{center, space.size() > 1 ? 2.0 * far : 1.0};
}

std::string cell(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::string out;
    for (const auto& item : j) out += (out.empty() ? "" : " ") + cell(item);
    return out;
  }
  return j.dump();
}

std::string csv(const std::vector<std::string>& header, const std::vector<Json>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      out << (i ? "," : "") << (row.contains(header[i]) ? cell(row[header[i]]) : "");
    }
    out << "\n";
  }
  return out.str();
}

struct Result {
  Json report;
  std::string table;  // CSV rendering
  bool violated = false;
};

Result run_profile(const Options& o) {
  const hlmax::BallIndex index(hlmax::io::parse_space(load(o.space, "--space")));
  const auto profile = hlmax::space_profile(index);
  const auto config = hlmax::make_cz_config(profile, o.a, o.eta, o.allow_small_a);
  auto violations = hlmax::check_engulfing(index, profile);
  const std::vector<double> lambdas{2.0, profile.engulf, config.theta, config.eta};
  for (auto& v : hlmax::check_dilation_bound(index, profile, lambdas)) violations.push_back(std::move(v));
  Result r;
  r.report = Json{{"points", index.space().size()},
                  {"canonical_balls", index.size()},
                  {"distinct_balls", index.distinct().size()},
                  {"profile", hlmax::io::to_json(profile)},
                  {"config", hlmax::io::to_json(config)},
                  {"violations", hlmax::io::to_json(violations)}};
  Json row = r.report["profile"];
  row.update(r.report["config"]);
  r.table = csv({"kappa", "c_mu", "d_mu", "engulf", "theta", "eta", "a", "required_a"}, {row});
  r.violated = !violations.empty();
  return r;
}

Result run_constants(const Options& o) {
  const hlmax::BallIndex index(hlmax::io::parse_space(load(o.space, "--space")));
  const auto w = hlmax::io::parse_weight(load(o.w, "--w"), index.space(), "--w");
  const auto sigma = hlmax::io::parse_weight(load(o.sigma, "--sigma"), index.space(), "--sigma");
  const auto phi = load_phi(o.phi);
  Result r;
  Json rows = Json::array();
  std::vector<Json> table;
  for (double p : o.p) {
    rows.push_back(hlmax::io::to_json(hlmax::compute_constants(index, w, sigma, hlmax::LebesgueExponent(p), phi)));
    table.push_back(rows.back());
  }
  r.report = Json{{"profile", hlmax::io::to_json(hlmax::space_profile(index))}, {"constants", rows}};
  r.table = csv({"p", "phi", "phi_conjugate", "ap", "two_weight_ap", "ainfty_fw", "ainfty_exp", "bump_ap", "wp",
                 "sawyer"},
                table);
  return r;
}

Result run_cz(const Options& o) {
  const hlmax::BallIndex index(hlmax::io::parse_space(load(o.space, "--space")));
  const auto f = hlmax::io::parse_field(load(o.f, "--f"), index.space(), "--f");
  const auto config = hlmax::make_cz_config(hlmax::space_profile(index), o.a, o.eta, o.allow_small_a);
  const hlmax::Ball base = base_ball(index.space(), o);
  Result r;
  std::vector<Json> table;
  if (o.lambda) {
    const auto dec = hlmax::cz_decompose(index, base, f, *o.lambda, config);
    const auto check = hlmax::verify_cz_properties(index, dec, f, config);
    r.report = hlmax::io::to_json(dec);
    r.report["undilated_exceedances"] = check.undilated_exceedances;
    r.report["violations"] = hlmax::io::to_json(check.violations);
    r.violated = !check.violations.empty();
    for (const auto& b : r.report["balls"]) table.push_back(b);
  } else {
    const auto family = hlmax::multi_level_decompose(index, base, f, config);
    const auto violations = hlmax::verify_disjointing(index, family, config);
    r.report = hlmax::io::to_json(family);
    r.report["violations"] = hlmax::io::to_json(violations);
    r.violated = !violations.empty();
    for (const auto& level : r.report["levels"]) {
      for (Json b : level["balls"]) {
        b["k"] = level["k"];
        table.push_back(b);
      }
    }
  }
  r.table = csv({"k", "center", "radius", "measure", "average", "members"}, table);
  return r;
}

Result run_opnorm(const Options& o) {
  const hlmax::BallIndex index(hlmax::io::parse_space(load(o.space, "--space")));
  const auto w = hlmax::io::parse_weight(load(o.w, "--w"), index.space(), "--w");
  const auto sigma = hlmax::io::parse_weight(load(o.sigma, "--sigma"), index.space(), "--sigma");
  hlmax::OpNormStrategies strategies;
  strategies.seed = o.seed.value_or(0);
  strategies.random_samples = o.samples;
  std::stringstream list(o.strategies);
  for (std::string name; std::getline(list, name, ',');) {
    if (name == "indicators") {
      strategies.indicators = true;
    } else if (name == "random") {
      strategies.random = true;
    } else if (name == "ascent" || name == "coordinate-ascent") {
      strategies.coordinate_ascent = true;
    } else {
      throw hlmax::InputError("--strategies: unknown strategy '" + name + "'");
    }
  }
  Result r;
  Json rows = Json::array();
  std::vector<Json> table;
  for (double pv : o.p) {
    const hlmax::LebesgueExponent p(pv);
    const auto estimate = hlmax::opnorm_lower_bound(index, w, sigma, p, strategies);
    const double sawyer = hlmax::sawyer_constant(index, w, sigma, p);
    Json row = hlmax::io::to_json(estimate);
    row["p"] = pv;
    row["sawyer"] = sawyer;
    if (sawyer > estimate.value + hlmax::kIdentityTolerance * std::max(1.0, estimate.value)) r.violated = true;
    rows.push_back(row);
    table.push_back(row);
  }
  r.report = Json{{"seed", strategies.seed}, {"estimates", rows}};
  r.table = csv({"p", "value", "sawyer", "evaluations", "strategies"}, table);
  return r;
}

Result run_verify(const Options& o) {
  const auto report = hlmax::run_suite(load(o.manifest, "--manifest"), o.seed);
  Result r;
  r.report = report.json;
  std::vector<Json> table;
  for (const auto& instance : report.json["results"]) {
    table.push_back(Json{{"name", instance["name"]},
                         {"points", instance["points"]},
                         {"violations", instance["violations"].size()}});
  }
  r.table = csv({"name", "points", "violations"}, table);
  r.violated = report.violations > 0;
  return r;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"hlmax: two-weight maximal inequality verification lab"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* profile = app.add_subcommand("profile", "structural constants of a space");
  profile->add_option("--space", o.space, "space spec (file or inline JSON)")->required();
  profile->add_option("--a", o.a, "level base override");
  profile->add_option("--eta", o.eta, "dilation parameter override");
  add_common(profile, o);

  auto* constants = app.add_subcommand("constants", "weight constants");
  constants->add_option("--space", o.space)->required();
  constants->add_option("--w", o.w)->required();
  constants->add_option("--sigma", o.sigma)->required();
  constants->add_option("--p", o.p, "one or more exponents");
  constants->add_option("--phi", o.phi, "power:s, powerlog:s:a, or a JSON spec");
  add_common(constants, o);

  auto* cz = app.add_subcommand("cz", "Calderon-Zygmund decomposition (multi-level without --lambda)");
  cz->add_option("--space", o.space)->required();
  cz->add_option("--f", o.f)->required();
  cz->add_option("--lambda", o.lambda);
  cz->add_option("--a", o.a);
  cz->add_option("--eta", o.eta);
  cz->add_flag("--allow-small-a", o.allow_small_a, "accept a below 2(4 theta eta)^D");
  cz->add_option("--base-center", o.base_center);
  cz->add_option("--base-radius", o.base_radius);
  add_common(cz, o);

  auto* opnorm = app.add_subcommand("opnorm", "operator-norm lower bound");
  opnorm->add_option("--space", o.space)->required();
  opnorm->add_option("--w", o.w)->required();
  opnorm->add_option("--sigma", o.sigma)->required();
  opnorm->add_option("--p", o.p);
  opnorm->add_option("--strategies", o.strategies, "comma list of indicators,random,ascent");
  opnorm->add_option("--samples", o.samples, "random fields to try");
  opnorm->add_option("--seed", o.seed);
  add_common(opnorm, o);

  auto* verify = app.add_subcommand("verify", "run a verification manifest");
  verify->add_option("--manifest", o.manifest)->required();
  verify->add_option("--seed", o.seed, "override the manifest seed");
  add_common(verify, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "hlmax: error: " << e.what() << "\n";
    return 2;
  }

  try {
    Result result;
    if (*profile) {
      result = run_profile(o);
    } else if (*constants) {
      result = run_constants(o);
    } else if (*cz) {
      result = run_cz(o);
    } else if (*opnorm) {
      result = run_opnorm(o);
    } else {
      result = run_verify(o);
    }
    const std::string text = o.format == "csv" ? result.table : result.report.dump(2) + "\n";
    if (o.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) throw hlmax::InputError("--out: cannot write '" + o.out + "'");
      file << text;
    }
    return result.violated ? 1 : 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hlmax: error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {
    std::cerr << "hlmax: error: " << e.what() << "\n";
  }
  return 2;
}
