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
#ifndef HLMAX_WEIGHTS_HPP
#define HLMAX_WEIGHTS_HPP

// Weight constants, each a supremum of a ball functional over the
// canonical balls of the space:
//
//   [w]_{A_p}           sup (avg w)(avg w^{-1/(p-1)})^{p-1}
//   [w,s]_{A_p}         sup (avg w)(avg s)^{p-1}
//   [w]_{A_inf}         sup (1/w(B)) int_B M(w chi_B)
//   [w]^{exp}_{A_inf}   sup (avg w) exp(avg log w^{-1})
//   [w,s,Phi]_{A_p}     sup (avg w) ||s^{1/p'}||_{Phi,B}^p
//   [s,Phi]_{W_p}       sup (1/s(B)) int_B M_Phi(s^{1/p} chi_B)^p
//   [w,s]_{S_p}         sup ((1/s(B)) int_B M(s chi_B)^p w)^{1/p}

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hlmax/errors.hpp"
#include "hlmax/maximal.hpp"
#include "hlmax/orlicz.hpp"
#include "hlmax/space.hpp"

namespace hlmax {

/// A weight: nonnegative finite density against mu, not identically zero.
class WeightVector : public FieldVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> values) : FieldVector(std::move(values)) {
    const auto v = this->values();
    if (std::none_of(v.begin(), v.end(), [](double x) { return x > 0.0; })) {
      throw InputError("weight must have at least one strictly positive entry");
    }
  }

  bool strictly_positive() const {
    const auto v = values();
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
  }

  WeightVector scaled(double c) const {
    std::vector<double> out(vector());
    for (double& x : out) x *= c;
    return WeightVector(std::move(out));
  }
};

namespace detail {

inline double average_over(const BallIndex& index, std::size_t ball, std::span<const double> f) {
  double total = 0.0;
  for (std::size_t y : index.members(ball)) total += f[y] * index.space().mass(y);
  return total / index[ball].measure;
}

inline std::vector<double> pointwise_pow(std::span<const double> v, double e) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? std::pow(v[i], e) : 0.0;
  return out;
}

inline std::vector<double> cut_to(const BallIndex& index, std::size_t ball, std::span<const double> v) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t y : index.members(ball)) out[y] = v[y];
  return out;
}

}  // namespace detail

inline double ap_constant(const BallIndex& index, const WeightVector& w, const LebesgueExponent& p) {
  require_length(index.space(), w, "w");
  if (!w.strictly_positive()) throw InputError("Ap requires strictly positive weight");
  const double e = p.value() - 1.0;
  const auto dual = detail::pointwise_pow(w.values(), -1.0 / e);
  double best = 0.0;
  for (std::size_t i : index.distinct()) {
    best = std::max(best, detail::average_over(index, i, w.values()) *
                              std::pow(detail::average_over(index, i, dual), e));
  }
  return best;
}

inline double two_weight_ap(const BallIndex& index, const WeightVector& w, const WeightVector& sigma,
                            const LebesgueExponent& p) {
  require_length(index.space(), w, "w");
  require_length(index.space(), sigma, "sigma");
  double best = 0.0;
  for (std::size_t i : index.distinct()) {
    best = std::max(best, detail::average_over(index, i, w.values()) *
                              std::pow(detail::average_over(index, i, sigma.values()),
                                       p.value() - 1.0));
  }
  return best;
}

/// Fujii-Wilson A_inf constant; balls with w(B) = 0 are skipped.
inline double ainfty_fujii_wilson(const BallIndex& index, const WeightVector& w) {
  require_length(index.space(), w, "w");
  const auto& space = index.space();
  double best = 0.0;
  for (std::size_t i : index.distinct()) {
    const double wb = detail::average_over(index, i, w.values()) * index[i].measure;
    if (wb <= 0.0) continue;
    const auto m = hl_maximal(index, FieldVector(detail::cut_to(index, i, w.values())));
    double total = 0.0;
    for (std::size_t y : index.members(i)) total += m[y] * space.mass(y);
    best = std::max(best, total / wb);
  }
  return best;
}

inline double ainfty_exp(const BallIndex& index, const WeightVector& w) {
  require_length(index.space(), w, "w");
  if (!w.strictly_positive()) {
    throw InputError("exponential A_inf requires strictly positive weight");
  }
  std::vector<double> log_inverse(w.size());
  for (std::size_t y = 0; y < w.size(); ++y) log_inverse[y] = -std::log(w[y]);
  double best = 0.0;
  for (std::size_t i : index.distinct()) {
    best = std::max(best, detail::average_over(index, i, w.values()) *
                              std::exp(detail::average_over(index, i, log_inverse)));
  }
  return best;
}

/// Bump constant [w, sigma, Phi]_{A_p}.
inline double bump_ap(const BallIndex& index, const WeightVector& w, const WeightVector& sigma,
                      const LebesgueExponent& p, const YoungFunction& phi) {
  require_length(index.space(), w, "w");
  require_length(index.space(), sigma, "sigma");
  const auto root = detail::pointwise_pow(sigma.values(), 1.0 / p.conjugate());
  double best = 0.0;
  for (std::size_t i : index.distinct()) {
    const double norm =
        luxemburg_norm(index.space(), root, index.members(i), index[i].measure, phi);
    best = std::max(best, detail::average_over(index, i, w.values()) * std::pow(norm, p.value()));
  }
  return best;
}

/// [sigma, Phi]_{W_p}; balls with sigma(B) = 0 are skipped.
inline double wp_constant(const BallIndex& index, const WeightVector& sigma, const LebesgueExponent& p,
                          const YoungFunction& phi) {
  require_length(index.space(), sigma, "sigma");
  const auto& space = index.space();
  const std::size_t n = space.size();
  const auto root = detail::pointwise_pow(sigma.values(), 1.0 / p.value());
  std::vector<double> local(n);
  double best = 0.0;
  for (std::size_t i : index.distinct()) {
    const double sb = detail::average_over(index, i, sigma.values()) * index[i].measure;
    if (sb <= 0.0) continue;
    const auto g = detail::cut_to(index, i, root);
    // M_Phi(g) is only needed on B, and ||g||_{Phi,B'} depends on B' only
    // through B' cap B and mu(B'), decreasing in mu(B'). So each distinct
    // intersection is normed once, against the smallest enclosing measure.
    std::vector<char> in_ball(n, 0);
    for (std::size_t y : index.members(i)) in_ball[y] = 1;
    std::map<std::vector<std::uint64_t>, double> smallest;
    std::vector<std::uint64_t> key((n + 63) / 64);
    for (std::size_t j : index.distinct()) {
      std::fill(key.begin(), key.end(), 0);
      bool touches = false;
      for (std::size_t y : index.members(j)) {
        if (!in_ball[y]) continue;
        key[y / 64] |= std::uint64_t{1} << (y % 64);
        touches = touches || g[y] > 0.0;
      }
      if (!touches) continue;
      auto [it, fresh] = smallest.try_emplace(key, index[j].measure);
      if (!fresh) it->second = std::min(it->second, index[j].measure);
    }
    std::fill(local.begin(), local.end(), 0.0);
    std::vector<std::size_t> members;
    for (const auto& [mask, measure] : smallest) {
      members.clear();
      for (std::size_t y = 0; y < n; ++y) {
        if (mask[y / 64] >> (y % 64) & 1U) members.push_back(y);
      }
      const double norm = luxemburg_norm(space, g, members, measure, phi);
      for (std::size_t y : members) local[y] = std::max(local[y], norm);
    }
    double total = 0.0;
    for (std::size_t y : index.members(i)) total += std::pow(local[y], p.value()) * space.mass(y);
    best = std::max(best, total / sb);
  }
  return best;
}

/// Sawyer testing constant [w, sigma]_{S_p}; balls with sigma(B) = 0 are skipped.
inline double sawyer_constant(const BallIndex& index, const WeightVector& w,
                              const WeightVector& sigma, const LebesgueExponent& p) {
  require_length(index.space(), w, "w");
  require_length(index.space(), sigma, "sigma");
  const auto& space = index.space();
  double best = 0.0;
  for (std::size_t i : index.distinct()) {
    const double sb = detail::average_over(index, i, sigma.values()) * index[i].measure;
    if (sb <= 0.0) continue;
    const auto m = hl_maximal(index, FieldVector(detail::cut_to(index, i, sigma.values())));
    double total = 0.0;
    for (std::size_t y : index.members(i)) {
      total += std::pow(m[y], p.value()) * w[y] * space.mass(y);
    }
    best = std::max(best, total / sb);
  }
  return std::pow(best, 1.0 / p.value());
}

/// Every weight constant for one (space, w, sigma, p, Phi) context. `wp`
/// is taken against the conjugate of Phi, the pairing used by the two-weight
/// bound; `ap` and `ainfty_exp` are absent unless w is strictly positive.
struct ConstantsReport {
  double p = 2.0;
  std::string phi;
  std::string phi_conjugate;
  std::optional<double> ap;
  double two_weight_ap = 0.0;
  double ainfty_fw = 0.0;
  std::optional<double> ainfty_exp;
  double bump_ap = 0.0;
  double wp = 0.0;
  double sawyer = 0.0;
};

inline ConstantsReport compute_constants(const BallIndex& index, const WeightVector& w,
                                         const WeightVector& sigma, const LebesgueExponent& p,
                                         const YoungFunction& phi) {
  const YoungFunction phi_bar = young_conjugate(phi);
  ConstantsReport report;
  report.p = p.value();
  report.phi = phi.describe();
  report.phi_conjugate = phi_bar.describe();
  if (w.strictly_positive()) {
    report.ap = ap_constant(index, w, p);
    report.ainfty_exp = ainfty_exp(index, w);
  }
  report.two_weight_ap = two_weight_ap(index, w, sigma, p);
  report.ainfty_fw = ainfty_fujii_wilson(index, w);
  report.bump_ap = bump_ap(index, w, sigma, p, phi);
  report.wp = wp_constant(index, sigma, p, phi_bar);
  report.sawyer = sawyer_constant(index, w, sigma, p);
  return report;
}

}  // namespace hlmax

#endif  // HLMAX_WEIGHTS_HPP
