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
#ifndef HLMAX_SPACE_HPP
#define HLMAX_SPACE_HPP

// Finite quasimetric measure spaces, open balls, and the canonical ball
// enumeration that turns suprema over "all balls" into finite maxima.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hlmax/errors.hpp"

namespace hlmax {

/// Relative slack granted to floating-point comparisons inside checkers.
inline constexpr double kCheckHeadroom = 1e-12;

enum class GridMetric { l1, linf, l2 };

/// A finite point set with a symmetric distance matrix and strictly positive
/// point masses. Instances are validated on construction and immutable.
class QuasiMetricSpace {
 public:
  static QuasiMetricSpace from_matrix(const std::vector<std::vector<double>>& dist,
                                      std::vector<double> mass) {
    const std::size_t n = dist.size();
    if (n == 0) throw InputError("empty space: at least one point is required");
    if (mass.size() != n) {
      throw InputError("dimension mismatch: dist has " + std::to_string(n) +
                       " rows but mass has " + std::to_string(mass.size()) + " entries");
    }
    std::vector<double> flat(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[i].size() != n) {
        throw InputError("dimension mismatch: dist row " + std::to_string(i) + " has " +
                         std::to_string(dist[i].size()) + " entries, expected " +
                         std::to_string(n));
      }
      std::copy(dist[i].begin(), dist[i].end(), flat.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
    return QuasiMetricSpace(n, std::move(flat), std::move(mass));
  }

  /// Regular grid with unit spacing. `mass` empty means uniform unit masses.
  static QuasiMetricSpace grid(const std::vector<std::size_t>& shape, GridMetric metric,
                               std::vector<double> mass = {}) {
    if (shape.empty() || shape.size() > 2) {
      throw InputError("grid shape must have one or two extents");
    }
    for (std::size_t extent : shape) {
      if (extent == 0) throw InputError("grid shape extents must be positive");
    }
    const std::size_t rows = shape[0];
    const std::size_t cols = shape.size() == 2 ? shape[1] : 1;
    const std::size_t n = rows * cols;
    if (mass.empty()) mass.assign(n, 1.0);
    if (mass.size() != n) {
      throw InputError("dimension mismatch: grid has " + std::to_string(n) +
                       " points but mass has " + std::to_string(mass.size()) + " entries");
    }
    std::vector<double> flat(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double dr = std::abs(static_cast<double>(i / cols) - static_cast<double>(j / cols));
        const double dc = std::abs(static_cast<double>(i % cols) - static_cast<double>(j % cols));
        double d = 0.0;
        switch (metric) {
          case GridMetric::l1: d = dr + dc; break;
          case GridMetric::linf: d = std::max(dr, dc); break;
          case GridMetric::l2: d = std::hypot(dr, dc); break;
        }
        flat[i * n + j] = d;
      }
    }
    return QuasiMetricSpace(n, std::move(flat), std::move(mass));
  }

  std::size_t size() const { return n_; }
  double distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  double mass(std::size_t i) const { return mass_[i]; }
  std::span<const double> masses() const { return mass_; }
  double total_mass() const { return total_mass_; }

  double measure(std::span<const std::size_t> points) const {
    double total = 0.0;
    for (std::size_t y : points) total += mass_[y];
    return total;
  }

 private:
  QuasiMetricSpace(std::size_t n, std::vector<double> dist, std::vector<double> mass)
      : n_(n), dist_(std::move(dist)), mass_(std::move(mass)) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!std::isfinite(mass_[i]) || mass_[i] <= 0.0) {
        throw InputError("nonpositive mass at index " + std::to_string(i));
      }
      for (std::size_t j = 0; j < n_; ++j) {
        const double d = dist_[i * n_ + j];
        const std::string where = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
        if (!std::isfinite(d)) throw InputError("non-finite distance at " + where);
        if (d < 0.0) throw InputError("negative distance at " + where);
        if (i == j && d != 0.0) throw InputError("nonzero diagonal distance at " + where);
        if (i != j && d == 0.0) throw InputError("zero off-diagonal distance at " + where);
        if (d != dist_[j * n_ + i]) throw InputError("asymmetric distance at " + where);
      }
    }
    total_mass_ = std::accumulate(mass_.begin(), mass_.end(), 0.0);
  }

  std::size_t n_ = 0;
  std::vector<double> dist_;
  std::vector<double> mass_;
  double total_mass_ = 0.0;
};

/// Open ball B(center, radius) = {y : d(center, y) < radius}.
struct Ball {
  std::size_t center = 0;
  double radius = 1.0;

  friend bool operator==(const Ball&, const Ball&) = default;
};

inline bool ball_contains(const QuasiMetricSpace& space, const Ball& ball, std::size_t y) {
  return space.distance(ball.center, y) < ball.radius;
}

/// Member indices in ascending order.
inline std::vector<std::size_t> ball_members(const QuasiMetricSpace& space, const Ball& ball) {
  if (!(ball.radius > 0.0)) throw InputError("ball radius must be positive");
  std::vector<std::size_t> members;
  for (std::size_t y = 0; y < space.size(); ++y) {
    if (ball_contains(space, ball, y)) members.push_back(y);
  }
  return members;
}

inline double ball_measure(const QuasiMetricSpace& space, const Ball& ball) {
  double total = 0.0;
  for (std::size_t y = 0; y < space.size(); ++y) {
    if (ball_contains(space, ball, y)) total += space.mass(y);
  }
  return total;
}

inline Ball dilate_ball(const Ball& ball, double lambda) {
  if (!(lambda >= 1.0)) {
    throw InputError("dilation factor must be >= 1, got " + std::to_string(lambda));
  }
  return Ball{ball.center, ball.radius * lambda};
}

struct CanonicalBall {
  Ball ball;
  std::size_t count = 0;  // number of members
  double measure = 0.0;
};

/// The canonical balls of a space: one ball per (center, achievable member
/// set). The radius of a canonical ball is the next distance breakpoint,
/// i.e. the largest radius that still realizes its member set; the
/// whole-space ball of a center uses twice the center's largest distance.
/// Members of a canonical ball are a prefix of the center's distance order.
class BallIndex {
 public:
  explicit BallIndex(QuasiMetricSpace space) : space_(std::move(space)) {
    const std::size_t n = space_.size();
    order_.resize(n * n);
    prefix_mass_.assign(n * (n + 1), 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      auto row = std::span(order_).subspan(x * n, n);
      std::iota(row.begin(), row.end(), std::size_t{0});
      std::stable_sort(row.begin(), row.end(), [&](std::size_t a, std::size_t b) {
        return space_.distance(x, a) < space_.distance(x, b);
      });
      for (std::size_t k = 0; k < n; ++k) {
        prefix_mass_[x * (n + 1) + k + 1] = prefix_mass_[x * (n + 1) + k] + space_.mass(row[k]);
      }
      // Breakpoints: every distinct positive distance closes off the prefix
      // of points strictly closer than it.
      for (std::size_t k = 1; k < n; ++k) {
        const double d = space_.distance(x, row[k]);
        if (d != space_.distance(x, row[k - 1])) {
          balls_.push_back(CanonicalBall{Ball{x, d}, k, prefix_mass_[x * (n + 1) + k]});
        }
      }
      const double far = n > 1 ? space_.distance(x, row[n - 1]) : 0.5;
      balls_.push_back(CanonicalBall{Ball{x, 2.0 * far}, n, prefix_mass_[x * (n + 1) + n]});
    }
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t i = 0; i < balls_.size(); ++i) {
      auto m = members(i);
      std::vector<std::size_t> key(m.begin(), m.end());
      std::sort(key.begin(), key.end());
      if (seen.insert(std::move(key)).second) distinct_.push_back(i);
    }
  }

  const QuasiMetricSpace& space() const { return space_; }
  std::size_t size() const { return balls_.size(); }
  const CanonicalBall& operator[](std::size_t i) const { return balls_[i]; }
  std::span<const CanonicalBall> balls() const { return balls_; }

  /// Points ordered by distance from `center` (ties by index).
  std::span<const std::size_t> by_distance(std::size_t center) const {
    return std::span(order_).subspan(center * space_.size(), space_.size());
  }

  std::span<const std::size_t> members(std::size_t i) const {
    return by_distance(balls_[i].ball.center).first(balls_[i].count);
  }

  /// One representative ball (the first in enumeration order) per distinct
  /// member set. Every ball functional in this library depends on a ball
  /// only through its member set.
  std::span<const std::size_t> distinct() const { return distinct_; }

  bool contains(std::size_t i, std::size_t y) const {
    return ball_contains(space_, balls_[i].ball, y);
  }

  /// Sum of f*mass over every canonical ball, via per-center prefix sums.
  std::vector<double> sums(std::span<const double> f) const {
    const std::size_t n = space_.size();
    std::vector<double> prefix(n + 1);
    std::vector<double> out(balls_.size());
    std::size_t current = n;  // center whose prefix is loaded
    for (std::size_t i = 0; i < balls_.size(); ++i) {
      const std::size_t x = balls_[i].ball.center;
      if (x != current) {
        auto row = by_distance(x);
        for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + f[row[k]] * space_.mass(row[k]);
        current = x;
      }
      out[i] = prefix[balls_[i].count];
    }
    return out;
  }

  /// Measure of {y : d(center, y) < radius} for an arbitrary radius.
  double measure_of(const Ball& ball) const {
    const std::size_t n = space_.size();
    auto row = by_distance(ball.center);
    const auto it = std::partition_point(row.begin(), row.end(), [&](std::size_t y) {
      return space_.distance(ball.center, y) < ball.radius;
    });
    return prefix_mass_[ball.center * (n + 1) + static_cast<std::size_t>(it - row.begin())];
  }

 private:
  QuasiMetricSpace space_;
  std::vector<std::size_t> order_;
  std::vector<double> prefix_mass_;
  std::vector<CanonicalBall> balls_;
  std::vector<std::size_t> distinct_;
};

inline std::vector<Ball> enumerate_balls(const QuasiMetricSpace& space) {
  BallIndex index(space);
  std::vector<Ball> out;
  out.reserve(index.size());
  for (const auto& b : index.balls()) out.push_back(b.ball);
  return out;
}

/// Structural constants of a space.
struct SpaceProfile {
  double kappa = 1.0;   // quasitriangle constant
  double c_mu = 1.0;    // doubling constant
  double d_mu = 0.0;    // doubling order log2(c_mu)
  double engulf = 3.0;  // kappa * (2 kappa + 1)
};

namespace detail {

// Smallest double kappa >= 1 with d(x,y) <= kappa (d(x,z) + d(z,y)) holding
// in floating point for every triple.
inline double certified_kappa(const QuasiMetricSpace& space) {
  const std::size_t n = space.size();
  double kappa = 1.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const double dxy = space.distance(x, y);
      for (std::size_t z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        const double detour = space.distance(x, z) + space.distance(z, y);
        if (dxy > kappa * detour) {
          kappa = dxy / detour;
          while (dxy > kappa * detour) kappa = std::nextafter(kappa, HUGE_VAL);
        }
      }
    }
  }
  return kappa;
}

inline bool kappa_certifies(const QuasiMetricSpace& space, double kappa) {
  const std::size_t n = space.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        if (space.distance(x, y) > kappa * (space.distance(x, z) + space.distance(z, y))) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace detail

/// Computes kappa, C_mu, D_mu and the engulfing factor from the data. A
/// caller-supplied kappa is only accepted after it is verified as a valid
/// quasitriangle constant.
inline SpaceProfile space_profile(const BallIndex& index,
                                  std::optional<double> kappa_upper = std::nullopt) {
  const auto& space = index.space();
  SpaceProfile profile;
  if (kappa_upper) {
    if (!(*kappa_upper >= 1.0) || !detail::kappa_certifies(space, *kappa_upper)) {
      throw InputError("supplied kappa " + std::to_string(*kappa_upper) +
                       " does not satisfy the quasitriangle inequality");
    }
    profile.kappa = *kappa_upper;
  } else {
    profile.kappa = detail::certified_kappa(space);
  }
  // The doubling ratio is constant in r between breakpoints except for the
  // growing outer ball, so the sup over all real r is attained at the
  // canonical (largest realizing) radii.
  double c_mu = 1.0;
  for (const auto& b : index.balls()) {
    const double doubled = index.measure_of(Ball{b.ball.center, 2.0 * b.ball.radius});
    c_mu = std::max(c_mu, doubled / b.measure);
  }
  profile.c_mu = c_mu;
  profile.d_mu = std::log2(c_mu);
  profile.engulf = profile.kappa * (2.0 * profile.kappa + 1.0);
  return profile;
}

inline SpaceProfile space_profile(const QuasiMetricSpace& space) {
  return space_profile(BallIndex(space));
}

/// Engulfing: intersecting balls with r(B1) <= r(B2) satisfy B1 within
/// engulf * B2. Returns the violating pairs (empty on every valid space).
inline std::vector<Violation> check_engulfing(const BallIndex& index, const SpaceProfile& profile) {
  std::vector<Violation> out;
  const auto& space = index.space();
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < index.size(); ++i) {
    const Ball& b1 = index[i].ball;
    for (std::size_t j = 0; j < index.size(); ++j) {
      const Ball& b2 = index[j].ball;
      if (b1.radius > b2.radius) continue;
      bool meets = false;
      for (std::size_t y = 0; y < n && !meets; ++y) {
        meets = index.contains(i, y) && index.contains(j, y);
      }
      if (!meets) continue;
      const Ball grown{b2.center, b2.radius * profile.engulf};
      for (std::size_t y : index.members(i)) {
        if (!ball_contains(space, grown, y)) {
          std::ostringstream msg;
          msg << "ball(" << b1.center << "," << b1.radius << ") not inside " << profile.engulf
              << "*ball(" << b2.center << "," << b2.radius << "): point " << y;
          out.push_back({"engulfing", msg.str()});
          break;
        }
      }
    }
  }
  return out;
}

/// Dilation bound mu(lambda B) <= (2 lambda)^D_mu mu(B) over canonical balls.
inline std::vector<Violation> check_dilation_bound(const BallIndex& index, const SpaceProfile& profile,
                                                   std::span<const double> lambdas) {
  std::vector<Violation> out;
  for (double lambda : lambdas) {
    const double factor = std::pow(2.0 * lambda, profile.d_mu);
    for (const auto& b : index.balls()) {
      const double grown = index.measure_of(dilate_ball(b.ball, lambda));
      if (grown > factor * b.measure * (1.0 + kCheckHeadroom)) {
        std::ostringstream msg;
        msg << "mu(" << lambda << "*ball(" << b.ball.center << "," << b.ball.radius
            << ")) = " << grown << " > " << factor << " * " << b.measure;
        out.push_back({"dilation", msg.str()});
      }
    }
  }
  return out;
}

}  // namespace hlmax

#endif  // HLMAX_SPACE_HPP
