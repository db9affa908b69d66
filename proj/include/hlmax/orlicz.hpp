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
#ifndef HLMAX_ORLICZ_HPP
#define HLMAX_ORLICZ_HPP

// Young functions, complementary pairs, local Luxemburg norms and the
// B_p tail integral alpha_p(Phi) = int_1^inf Phi(t) / t^p dt / t.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "hlmax/errors.hpp"
#include "hlmax/space.hpp"

namespace hlmax {

/// Root-finding tolerances shared by every iterative routine in the library.
struct NumericTolerances {
  double relative = 1e-12;
  std::uintmax_t max_iterations = 200;
  double quadrature_relative = 1e-8;
};

inline constexpr NumericTolerances kTolerances{};

/// A Lebesgue exponent 1 < p < inf; the conjugate p' is always derived.
class LebesgueExponent {
 public:
  explicit LebesgueExponent(double p) : p_(p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
      throw InputError("exponent p must lie in (1, inf), got " + std::to_string(p));
    }
  }
  double value() const { return p_; }
  double conjugate() const { return p_ / (p_ - 1.0); }

 private:
  double p_;
};

namespace detail {

struct RelativeTolerance {
  double rel;
  bool operator()(double a, double b) const {
    return std::abs(a - b) <= rel * std::min(std::abs(a), std::abs(b));
  }
};

// Root of an increasing function g on [lo, hi] with g(lo) <= 0 <= g(hi).
// Returns the upper end of the final bracket.
template <class F>
double increasing_root(F g, double lo, double hi) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo >= 0.0) return lo;
  if (ghi <= 0.0) return hi;
  std::uintmax_t iterations = kTolerances.max_iterations;
  const auto bracket = boost::math::tools::toms748_solve(
      g, lo, hi, glo, ghi, RelativeTolerance{kTolerances.relative}, iterations);
  return bracket.second;
}

// Safeguarded Newton for an increasing function on a bracket [lo, hi].
template <class F>
double newton_root(F step, double guess, double lo, double hi) {
  std::uintmax_t iterations = kTolerances.max_iterations;
  return boost::math::tools::newton_raphson_iterate(step, guess, lo, hi, 40, iterations);
}

// Expands [lo, hi] geometrically until g(hi) >= 0 for increasing g.
template <class F>
double expand_upper(F g, double hi) {
  for (int i = 0; i < 2100 && g(hi) < 0.0; ++i) hi *= 2.0;
  return hi;
}

}  // namespace detail

/// A Young function: continuous, convex, increasing, Phi(0) = 0, Phi -> inf.
/// Families: t^s; t^s log(e + t)^a; and the numeric Legendre conjugate of
/// another Young function. Values are immutable and cheap to copy.
class YoungFunction {
 public:
  enum class Family { power, power_log, numeric_conjugate };

  static YoungFunction power(double s) {
    if (!(s >= 1.0) || !std::isfinite(s)) {
      throw InputError("power Young function needs s >= 1, got " + std::to_string(s));
    }
    return YoungFunction(Family::power, s, 0.0, nullptr);
  }

  static YoungFunction power_log(double s, double a) {
    if (!(s > 1.0) || !std::isfinite(s)) {
      throw InputError("powerlog Young function needs s > 1, got " + std::to_string(s));
    }
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw InputError("powerlog Young function needs a >= 0, got " + std::to_string(a));
    }
    return YoungFunction(Family::power_log, s, a, nullptr);
  }

  static YoungFunction numeric_conjugate_of(const YoungFunction& base) {
    return YoungFunction(Family::numeric_conjugate, 0.0, 0.0,
                         std::make_shared<const YoungFunction>(base));
  }

  Family family() const { return family_; }
  /// Power exponent s (power and power-log families).
  double exponent() const { return s_; }
  /// Logarithmic exponent a (power-log family).
  double log_exponent() const { return a_; }
  /// The function this one conjugates (numeric conjugates only).
  const YoungFunction* base() const { return base_.get(); }

  double operator()(double t) const { return evaluate(t).first; }

  double derivative(double t) const { return evaluate(t).second; }

  /// (Phi(t), Phi'(t)); for numeric conjugates both come from one solve.
  std::pair<double, double> evaluate(double t) const {
    if (t <= 0.0) {
      const double slope = family_ == Family::power && s_ == 1.0 ? 1.0 : 0.0;
      return {0.0, slope};
    }
    switch (family_) {
      case Family::power: {
        if (s_ == 1.0) return {t, 1.0};
        const double v = std::pow(t, s_);
        return {v, s_ * v / t};
      }
      case Family::power_log: {
        const double log_term = std::log(std::numbers::e + t);
        const double v = std::pow(t, s_) * std::pow(log_term, a_);
        return {v, v * (s_ / t + a_ / (log_term * (std::numbers::e + t)))};
      }
      case Family::numeric_conjugate: {
        // The derivative of a Legendre conjugate is the maximizer.
        const double u = conjugate_argmax(t);
        return {std::max(0.0, u * t - (*base_)(u)), u};
      }
    }
    return {0.0, 0.0};
  }

  double second_derivative(double t) const {
    if (t <= 0.0) t = std::numeric_limits<double>::min();
    switch (family_) {
      case Family::power:
        return s_ == 1.0 ? 0.0 : s_ * (s_ - 1.0) * std::pow(t, s_ - 2.0);
      case Family::power_log: {
        const double e_t = std::numbers::e + t;
        const double log_term = std::log(e_t);
        return std::pow(t, s_ - 2.0) * std::pow(log_term, a_ - 2.0) *
               (s_ * (s_ - 1.0) * log_term * log_term + 2.0 * s_ * a_ * t * log_term / e_t +
                a_ * t * t * ((a_ - 1.0) - log_term) / (e_t * e_t));
      }
      case Family::numeric_conjugate:
        return 1.0 / base_->second_derivative(conjugate_argmax(t));
    }
    return 0.0;
  }

  double inverse(double t) const {
    if (t <= 0.0) return 0.0;
    if (family_ == Family::power) return s_ == 1.0 ? t : std::pow(t, 1.0 / s_);
    const auto g = [&](double u) { return (*this)(u)-t; };
    const double hi = detail::expand_upper(g, 1.0);
    return detail::increasing_root(g, 0.0, hi);
  }

  /// Phi^{-1}(1), cached at construction.
  double inverse_at_one() const { return unit_inverse_; }

  std::string describe() const {
    switch (family_) {
      case Family::power:
        return "power:" + format_number(s_);
      case Family::power_log:
        return "powerlog:" + format_number(s_) + ":" + format_number(a_);
      case Family::numeric_conjugate:
        return "conjugate(" + base_->describe() + ")";
    }
    return {};
  }

 private:
  YoungFunction(Family family, double s, double a, std::shared_ptr<const YoungFunction> base)
      : family_(family), s_(s), a_(a), base_(std::move(base)) {
    unit_inverse_ = inverse(1.0);
  }

  static std::string format_number(double x) {
    std::string out = std::to_string(x);
    while (out.size() > 1 && out.back() == '0') out.pop_back();
    if (!out.empty() && out.back() == '.') out.pop_back();
    return out;
  }

  // Stationary point of u*t - Phi(u): Phi'(u) = t. The objective is concave,
  // so this is its unique maximizer on [0, inf).
  double conjugate_argmax(double t) const {
    if (t <= 0.0) return 0.0;
    const YoungFunction& phi = *base_;
    const auto g = [&](double u) { return phi.derivative(u) - t; };
    if (g(0.0) >= 0.0) return 0.0;
    const double hi = detail::expand_upper(g, 1.0);
    const auto step = [&](double u) {
      return std::make_pair(phi.derivative(u) - t, phi.second_derivative(u));
    };
    double guess = 0.5 * hi;
    if (phi.family() != Family::numeric_conjugate) {
      // Leading-order guess from Phi'(u) ~ s u^{s-1}.
      const double s = phi.exponent();
      guess = std::clamp(std::pow(t / s, 1.0 / (s - 1.0)), 0.0, hi);
    }
    return detail::newton_root(step, guess, 0.0, hi);
  }

  Family family_;
  double s_;
  double a_;
  std::shared_ptr<const YoungFunction> base_;
  double unit_inverse_ = 1.0;
};

/// Complementary Young function. For t^s this is t^{s'} (the exact duality
/// of the power scale); every other family gets the numeric Legendre
/// transform sup_u (u t - Phi(u)).
inline YoungFunction young_conjugate(const YoungFunction& phi) {
  if (phi.family() == YoungFunction::Family::power) {
    const double s = phi.exponent();
    if (s <= 1.0) throw InputError("conjugate of t^s degenerates for s <= 1");
    return YoungFunction::power(s / (s - 1.0));
  }
  return YoungFunction::numeric_conjugate_of(phi);
}

/// Luxemburg norm of f over a point set of measure `measure`:
/// inf{lambda > 0 : (1/measure) sum_y Phi(f[y]/lambda) mass[y] <= 1}.
inline double luxemburg_norm(const QuasiMetricSpace& space, std::span<const double> f,
                             std::span<const std::size_t> members, double measure,
                             const YoungFunction& phi) {
  double largest = 0.0;
  double weighted = 0.0;
  for (std::size_t y : members) {
    largest = std::max(largest, f[y]);
    weighted += f[y] * space.mass(y);
  }
  if (largest == 0.0) return 0.0;
  // Jensen brackets the norm between avg/Phi^{-1}(1) and max/Phi^{-1}(1).
  const double unit = phi.inverse_at_one();
  const double lo = weighted / measure / unit;
  const double hi = largest / unit;
  if (hi - lo <= kTolerances.relative * hi) return hi;
  // 1 - (1/mu(B)) sum Phi(f/lambda) mass is increasing in lambda.
  const auto step = [&](double lambda) {
    double total = 0.0;
    double slope = 0.0;
    for (std::size_t y : members) {
      if (f[y] == 0.0) continue;
      const double x = f[y] / lambda;
      const auto [v, dv] = phi.evaluate(x);
      total += v * space.mass(y);
      slope += dv * x * space.mass(y);
    }
    return std::make_pair(1.0 - total / measure, slope / (lambda * measure));
  };
  if (step(lo).first >= 0.0) return lo;
  return detail::newton_root(step, 0.5 * (lo + hi), lo, hi);
}

inline double luxemburg_norm(const QuasiMetricSpace& space, std::span<const double> f,
                             const Ball& ball, const YoungFunction& phi) {
  const auto members = ball_members(space, ball);
  return luxemburg_norm(space, f, members, space.measure(members), phi);
}

/// Result of the tail integral alpha_p. When convergent, the true value lies
/// in [value, value + tail_bound].
struct TailIntegral {
  bool divergent = false;
  double value = 0.0;
  double tail_bound = 0.0;
};

namespace detail {

// int_0^U g(e^u) e^{-p u} du by adaptive Gauss-Kronrod.
template <class G>
double log_substituted(G phi, double p, double upper) {
  const auto integrand = [&](double u) { return phi(std::exp(u)) * std::exp(-p * u); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, upper, 15, kTolerances.quadrature_relative * 1e-2);
}

}  // namespace detail

inline TailIntegral alpha_p(const YoungFunction& phi, const LebesgueExponent& exponent) {
  const double p = exponent.value();
  using Family = YoungFunction::Family;
  switch (phi.family()) {
    case Family::power: {
      const double s = phi.exponent();
      if (s >= p) return {true, std::numeric_limits<double>::infinity(), 0.0};
      return {false, 1.0 / (p - s), 0.0};
    }
    case Family::power_log: {
      const double s = phi.exponent();
      const double a = phi.log_exponent();
      // log(e+t)^a >= 1, so s >= p diverges like the pure power.
      if (s >= p) return {true, std::numeric_limits<double>::infinity(), 0.0};
      // Beyond T0 = exp(a/delta), log(e+t)^a t^{-delta} is decreasing, hence
      // Phi(t) <= t^s log(e+T)^a (t/T)^delta and the tail past T is at most
      // log(e+T)^a T^{s-p} / (p - s - delta).
      const double delta = 0.5 * (p - s);
      double upper = std::max(1.0, a / delta);
      const auto tail = [&](double u) {
        return std::pow(std::log(std::numbers::e + std::exp(u)), a) * std::exp((s - p) * u) /
               (p - s - delta);
      };
      double value = detail::log_substituted(phi, p, upper);
      while (tail(upper) > kTolerances.quadrature_relative * value) {
        upper += 4.0;
        value = detail::log_substituted(phi, p, upper);
      }
      return {false, value, tail(upper)};
    }
    case Family::numeric_conjugate: {
      const YoungFunction& base = *phi.base();
      if (base.family() == Family::numeric_conjugate) {
        throw InputError("alpha_p is not supported for iterated numeric conjugates");
      }
      // Phi_base >= t^s gives conj <= c t^{s'} with c = (s-1)/s * s^{-1/(s-1)}.
      const double s = base.exponent();
      const double sc = s / (s - 1.0);
      if (sc > p) return {true, std::numeric_limits<double>::infinity(), 0.0};
      if (sc == p) {
        throw InputError("alpha_p at the critical exponent s' = p is not supported for " +
                         phi.describe());
      }
      const double c = (s - 1.0) / s * std::pow(s, -1.0 / (s - 1.0));
      const auto tail = [&](double u) { return c * std::exp((sc - p) * u) / (p - sc); };
      double upper = 1.0;
      double value = detail::log_substituted(phi, p, upper);
      while (tail(upper) > kTolerances.quadrature_relative * value) {
        upper += 4.0;
        value = detail::log_substituted(phi, p, upper);
      }
      return {false, value, tail(upper)};
    }
  }
  return {};
}

/// Sampled Young-function sanity: Phi(0) = 0, increasing and midpoint
/// convex on a log-spaced grid over [1e-3, 1e3].
inline std::vector<Violation> check_young_function(const YoungFunction& phi) {
  std::vector<Violation> out;
  if (phi(0.0) != 0.0) out.push_back({"young", "Phi(0) != 0"});
  double previous = 0.0;
  for (int k = -30; k <= 30; ++k) {
    const double t1 = std::pow(10.0, k / 10.0);
    const double t2 = std::pow(10.0, (k + 1) / 10.0);
    const double v1 = phi(t1);
    if (v1 < previous) out.push_back({"young", "not increasing at t=" + std::to_string(t1)});
    previous = v1;
    const double mid = phi(0.5 * (t1 + t2));
    if (mid > 0.5 * (v1 + phi(t2)) * (1.0 + 1e-9)) {
      out.push_back({"young", "midpoint convexity fails near t=" + std::to_string(t1)});
    }
  }
  return out;
}

/// Conjugate band t <= Phi^{-1}(t) PhiBar^{-1}(t) <= 2t on t = 10^-3 .. 10^3.
inline std::vector<Violation> check_conjugate_band(const YoungFunction& phi,
                                                   const YoungFunction& phi_bar) {
  std::vector<Violation> out;
  for (int k = -3; k <= 3; ++k) {
    const double t = std::pow(10.0, k);
    const double product = phi.inverse(t) * phi_bar.inverse(t);
    if (product < t * (1.0 - 1e-9) || product > 2.0 * t * (1.0 + 1e-9)) {
      out.push_back({"conjugate_band", "t=" + std::to_string(t) +
                                           " product=" + std::to_string(product)});
    }
  }
  return out;
}

}  // namespace hlmax

#endif  // HLMAX_ORLICZ_HPP
