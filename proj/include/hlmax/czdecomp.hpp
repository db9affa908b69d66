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
#ifndef HLMAX_CZDECOMP_HPP
#define HLMAX_CZDECOMP_HPP

// Calderon-Zygmund stopping-time decomposition of level sets of Mf, the
// multi-level disjointing construction E_i^k = B_i^k \ Omega_{k+1}, and
// exhaustive checkers for every property the two constructions promise.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hlmax/errors.hpp"
#include "hlmax/maximal.hpp"
#include "hlmax/space.hpp"

namespace hlmax {

struct CZConfig {
  double kappa = 1.0;
  double doubling_order = 0.0;  // D_mu
  double theta = 5.0;           // 4 kappa^2 + kappa
  double eta = 7.0;             // kappa^2 (4 kappa + 3) unless overridden
  double a = 2.0;               // level base for multi-level mode
  bool allow_small_a = false;   // permit a below 2 (4 theta eta)^D for exploration

  /// 2 (4 theta eta)^D, the smallest base for which mu(B_i^k) <= 2 mu(E_i^k).
  double required_a() const { return 2.0 * std::pow(4.0 * theta * eta, doubling_order); }
};

inline CZConfig make_cz_config(const SpaceProfile& profile, std::optional<double> a = std::nullopt,
                               std::optional<double> eta = std::nullopt,
                               bool allow_small_a = false) {
  CZConfig config;
  const double k = profile.kappa;
  config.kappa = k;
  config.doubling_order = profile.d_mu;
  config.theta = 4.0 * k * k + k;
  config.eta = eta.value_or(k * k * (4.0 * k + 3.0));
  if (!(config.eta > 1.0)) throw InputError("eta must exceed 1");
  config.allow_small_a = allow_small_a;
  if (a) {
    if (!(*a > 1.0)) throw InputError("level base a must exceed 1");
    config.a = *a;
  } else {
    const double d = profile.d_mu;
    config.a = std::ceil(std::max(config.required_a(), std::pow(2.0 * config.eta, d) + 1.0));
  }
  return config;
}

struct SelectedBall {
  Ball ball;
  std::vector<std::size_t> members;  // ascending
  double measure = 0.0;
  double average = 0.0;
  std::size_t generator = 0;  // the level-set point whose stopping ball this is
};

struct CZDecomposition {
  Ball base_ball;
  double level = 0.0;
  std::vector<std::size_t> omega;          // {x in S : Mf(x) > level}
  std::vector<std::size_t> omega_in_base;  // omega restricted to the base ball
  std::vector<SelectedBall> selected;
};

namespace detail {

inline double average_on(const QuasiMetricSpace& space, const FieldVector& f,
                         std::span<const std::size_t> members) {
  double total = 0.0;
  double measure = 0.0;
  for (std::size_t y : members) {
    total += f[y] * space.mass(y);
    measure += space.mass(y);
  }
  return total / measure;
}

inline double average_on(const QuasiMetricSpace& space, const FieldVector& f, const Ball& ball) {
  const auto members = ball_members(space, ball);
  return average_on(space, f, members);
}

inline std::vector<std::size_t> level_set(const FieldVector& mf, double level) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < mf.size(); ++x) {
    if (mf[x] > level) out.push_back(x);
  }
  return out;
}

inline bool disjoint_sorted(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

inline CZDecomposition decompose_with(const BallIndex& index, const Ball& base_ball,
                                      const FieldVector& f, double lambda, const FieldVector& mf) {
  const auto& space = index.space();
  CZDecomposition dec;
  dec.base_ball = base_ball;
  dec.level = lambda;
  dec.omega = level_set(mf, lambda);
  for (std::size_t x : dec.omega) {
    if (ball_contains(space, base_ball, x)) dec.omega_in_base.push_back(x);
  }
  if (dec.omega.empty()) return dec;

  // Admissible stopping balls: average strictly above the level.
  const auto sums = index.sums(f.values());
  std::vector<std::size_t> admissible;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (sums[i] / index[i].measure > lambda) admissible.push_back(i);
  }
  // Larger radius first, then smaller center: a total order on canonical balls.
  const auto before = [&](std::size_t i, std::size_t j) {
    if (index[i].ball.radius != index[j].ball.radius) return index[i].ball.radius > index[j].ball.radius;
    return index[i].ball.center < index[j].ball.center;
  };
  // Each level-set point takes the admissible ball of largest radius that
  // contains it; on a finite space the stopping-radius supremum is attained.
  std::vector<std::pair<std::size_t, std::size_t>> stopping;  // (ball, generator)
  for (std::size_t x : dec.omega) {
    std::optional<std::size_t> pick;
    for (std::size_t i : admissible) {
      if (index.contains(i, x) && (!pick || before(i, *pick))) pick = i;
    }
    // x is in omega, so some admissible ball contains it.
    stopping.emplace_back(*pick, x);
  }
  std::stable_sort(stopping.begin(), stopping.end(),
                   [&](const auto& l, const auto& r) { return before(l.first, r.first); });

  // Greedy Vitali selection.
  for (const auto& [i, x] : stopping) {
    auto m = index.members(i);
    std::vector<std::size_t> members(m.begin(), m.end());
    std::sort(members.begin(), members.end());
    const bool fresh = std::all_of(dec.selected.begin(), dec.selected.end(), [&](const SelectedBall& s) {
      return disjoint_sorted(s.members, members);
    });
    if (!fresh) continue;
    dec.selected.push_back(
        SelectedBall{index[i].ball, std::move(members), index[i].measure, sums[i] / index[i].measure, x});
  }
  return dec;
}

inline void check_level(const QuasiMetricSpace& space, const Ball& base_ball, const FieldVector& f,
                        double lambda) {
  if (!(lambda > 0.0)) throw PreconditionError("level must be positive");
  if (lambda < average_on(space, f, base_ball)) {
    throw PreconditionError("level below base average");
  }
  std::vector<std::size_t> all(space.size());
  for (std::size_t y = 0; y < all.size(); ++y) all[y] = y;
  if (lambda < average_on(space, f, all)) {
    throw PreconditionError("level below whole-space average: stopping radii are unbounded");
  }
}

}  // namespace detail

/// Stopping-time decomposition of {Mf > lambda} at a level lambda >= avg_B f.
inline CZDecomposition cz_decompose(const BallIndex& index, const Ball& base_ball, const FieldVector& f,
                                    double lambda, const CZConfig& /*config*/) {
  require_length(index.space(), f, "f");
  detail::check_level(index.space(), base_ball, f, lambda);
  return detail::decompose_with(index, base_ball, f, lambda, hl_maximal(index, f));
}

/// Outcome of a checker run. `undilated_exceedances` counts enclosing balls
/// B' (r(B') >= eta r(B_i)) whose own average exceeds the level; it is
/// recorded for information only.
struct CZCheckReport {
  std::vector<Violation> violations;
  std::size_t undilated_exceedances = 0;
};

/// Re-asserts disjointness, properties i)-iii) and the coverage measure bound
/// mu(Omega) <= sum mu(theta B_i) <= (2 theta)^D sum mu(B_i) by enumeration.
inline CZCheckReport verify_cz_properties(const BallIndex& index, const CZDecomposition& dec,
                                          const FieldVector& f, const CZConfig& config) {
  const auto& space = index.space();
  const double lambda = dec.level;
  const double h = kCheckHeadroom;
  CZCheckReport report;
  auto fail = [&](const char* check, const std::string& detail) {
    report.violations.push_back({check, detail});
  };
  const auto mf = hl_maximal(index, f);
  const auto omega = detail::level_set(mf, lambda);
  if (omega != dec.omega) fail("omega", "reported level set differs from {Mf > lambda}");

  for (std::size_t i = 0; i < dec.selected.size(); ++i) {
    const auto& bi = dec.selected[i];
    if (ball_members(space, bi.ball) != bi.members) fail("members", "stale member list");
    for (std::size_t j = i + 1; j < dec.selected.size(); ++j) {
      if (!detail::disjoint_sorted(bi.members, dec.selected[j].members)) {
        fail("disjoint", "selected balls " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
    }
    // i) left inclusion
    for (std::size_t y : bi.members) {
      if (!std::binary_search(omega.begin(), omega.end(), y)) {
        fail("i.inner", "point " + std::to_string(y) + " of ball " + std::to_string(i) + " is outside Omega");
      }
    }
    // ii)
    const double avg = detail::average_on(space, f, bi.members);
    if (!(avg > lambda * (1.0 - h))) {
      fail("ii", "ball " + std::to_string(i) + " average " + std::to_string(avg) + " <= level");
    }
    // iii) over every canonical enclosing ball with r(B') >= eta r(B_i)
    for (std::size_t j = 0; j < index.size(); ++j) {
      const Ball& outer = index[j].ball;
      if (outer.radius < config.eta * bi.ball.radius) continue;
      const bool encloses = std::all_of(bi.members.begin(), bi.members.end(),
                                        [&](std::size_t y) { return index.contains(j, y); });
      if (!encloses) continue;
      const double dilated = detail::average_on(space, f, dilate_ball(outer, config.eta));
      if (dilated > lambda * (1.0 + h)) {
        std::ostringstream msg;
        msg << "avg over eta*ball(" << outer.center << "," << outer.radius << ") = " << dilated
            << " > " << lambda << " (selected ball " << i << ")";
        fail("iii", msg.str());
      }
      if (detail::average_on(space, f, index.members(j)) > lambda * (1.0 + h)) {
        ++report.undilated_exceedances;
      }
    }
  }
  // i) right inclusion
  for (std::size_t x : omega) {
    const bool covered = std::any_of(dec.selected.begin(), dec.selected.end(), [&](const SelectedBall& s) {
      return ball_contains(space, dilate_ball(s.ball, config.theta), x);
    });
    if (!covered) fail("i.outer", "point " + std::to_string(x) + " of Omega is not covered by theta*B_i");
  }
  // Coverage sandwich.
  double omega_measure = space.measure(omega);
  double dilated_total = 0.0;
  double selected_total = 0.0;
  for (const auto& s : dec.selected) {
    dilated_total += index.measure_of(dilate_ball(s.ball, config.theta));
    selected_total += s.measure;
  }
  if (omega_measure > dilated_total * (1.0 + h)) {
    fail("coverage", "mu(Omega) exceeds the sum of mu(theta B_i)");
  }
  if (dilated_total > std::pow(2.0 * config.theta, config.doubling_order) * selected_total * (1.0 + h)) {
    fail("coverage", "sum of mu(theta B_i) exceeds (2 theta)^D sum mu(B_i)");
  }
  return report;
}

struct Level {
  int k = 0;
  double threshold = 0.0;  // a^k
  CZDecomposition decomposition;
  std::vector<std::vector<std::size_t>> e_sets;  // E_i^k, ascending members
};

struct LevelFamily {
  Ball base_ball;
  double a = 2.0;
  double base_average = 0.0;
  int k0 = 0;
  std::vector<Level> levels;
};

inline constexpr int kMaxLevels = 1000000;

/// Decomposes {Mf > a^k} for every k >= k0 until the level set empties,
/// where a^{k0-1} < avg_B f <= a^{k0}.
inline LevelFamily multi_level_decompose(const BallIndex& index, const Ball& base_ball,
                                         const FieldVector& f, const CZConfig& config) {
  const auto& space = index.space();
  require_length(space, f, "f");
  if (!config.allow_small_a && config.a < config.required_a()) {
    std::ostringstream msg;
    msg << "level base a=" << config.a << " is below the required bound 2(4*theta*eta)^D_mu = "
        << config.required_a();
    throw InputError(msg.str());
  }
  LevelFamily family;
  family.base_ball = base_ball;
  family.a = config.a;
  family.base_average = detail::average_on(space, f, base_ball);
  if (!(family.base_average > 0.0)) {
    throw PreconditionError("f vanishes identically on the base ball");
  }
  const double a = config.a;
  int k0 = static_cast<int>(std::ceil(std::log(family.base_average) / std::log(a)));
  while (std::pow(a, k0) < family.base_average) ++k0;
  while (std::pow(a, k0 - 1) >= family.base_average) --k0;
  family.k0 = k0;

  const auto mf = hl_maximal(index, f);
  std::vector<Level> levels;
  for (int k = k0;; ++k) {
    if (k - k0 >= kMaxLevels) throw std::runtime_error("multi-level decomposition did not terminate");
    const double threshold = std::pow(a, k);
    if (detail::level_set(mf, threshold).empty()) break;
    detail::check_level(space, base_ball, f, threshold);
    levels.push_back(Level{k, threshold, detail::decompose_with(index, base_ball, f, threshold, mf), {}});
  }
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const std::vector<std::size_t> next =
        l + 1 < levels.size() ? levels[l + 1].decomposition.omega : std::vector<std::size_t>{};
    for (const auto& b : levels[l].decomposition.selected) {
      std::vector<std::size_t> e;
      std::set_difference(b.members.begin(), b.members.end(), next.begin(), next.end(),
                          std::back_inserter(e));
      levels[l].e_sets.push_back(std::move(e));
    }
  }
  family.levels = std::move(levels);
  return family;
}

/// Checks the disjointing bounds mu(B_i^k cap Omega_{k+1}) < (4 theta eta)^D / a mu(B_i^k),
/// and mu(B_i^k) <= 2 mu(E_i^k) when a >= 2 (4 theta eta)^D, pairwise
/// disjointness of every E_i^k, and the starting-level bracket.
inline std::vector<Violation> verify_disjointing(const BallIndex& index, const LevelFamily& family,
                                                 const CZConfig& config) {
  const auto& space = index.space();
  const double h = kCheckHeadroom;
  std::vector<Violation> out;
  const double a = family.a;
  if (!(std::pow(a, family.k0 - 1) < family.base_average && family.base_average <= std::pow(a, family.k0))) {
    out.push_back({"k0", "starting level does not bracket the base average"});
  }
  const double factor = std::pow(4.0 * config.theta * config.eta, config.doubling_order) / a;
  const bool half_applies = a >= config.required_a();
  std::vector<int> owner(space.size(), -1);
  for (std::size_t l = 0; l < family.levels.size(); ++l) {
    const auto& level = family.levels[l];
    const std::vector<std::size_t> next =
        l + 1 < family.levels.size() ? family.levels[l + 1].decomposition.omega : std::vector<std::size_t>{};
    for (std::size_t i = 0; i < level.decomposition.selected.size(); ++i) {
      const auto& b = level.decomposition.selected[i];
      std::vector<std::size_t> overlap;
      std::set_intersection(b.members.begin(), b.members.end(), next.begin(), next.end(),
                            std::back_inserter(overlap));
      const double lhs = space.measure(overlap);
      const double rhs = factor * b.measure;
      std::ostringstream where;
      where << "level k=" << level.k << " ball " << i;
      if (!(lhs < rhs * (1.0 + h))) {
        out.push_back({"disjointing.strict", where.str() + ": " + std::to_string(lhs) +
                                                 " >= " + std::to_string(rhs)});
      }
      const auto& e = level.e_sets[i];
      if (half_applies && b.measure > 2.0 * space.measure(e) * (1.0 + h)) {
        out.push_back({"disjointing.half", where.str() + ": mu(B) > 2 mu(E)"});
      }
      for (std::size_t y : e) {
        if (owner[y] >= 0) {
          out.push_back({"disjointing.e_sets", where.str() + " shares point " + std::to_string(y)});
        }
        owner[y] = static_cast<int>(l);
      }
    }
  }
  return out;
}

}  // namespace hlmax

#endif  // HLMAX_CZDECOMP_HPP
