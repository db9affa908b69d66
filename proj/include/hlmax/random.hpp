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
#ifndef HLMAX_RANDOM_HPP
#define HLMAX_RANDOM_HPP

// Seeded generators for random spaces, weights and functions. All
// randomized behavior in the library flows through a caller-owned
// std::mt19937_64.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hlmax/space.hpp"
#include "hlmax/weights.hpp"

namespace hlmax {

using Rng = std::mt19937_64;

struct GeneratedSpace {
  std::string kind;
  QuasiMetricSpace space;
};

namespace detail {

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline std::vector<double> random_masses(Rng& rng, std::size_t n) {
  std::vector<double> mass(n, 1.0);
  const std::size_t mode = pick(rng, 0, 2);
  if (mode == 0) return mass;
  for (double& m : mass) m = log_uniform(rng, 0.2, 5.0);
  if (mode == 2 && n > 1) mass[pick(rng, 0, n - 1)] *= 50.0;  // an atom
  return mass;
}

inline QuasiMetricSpace from_points(const std::vector<std::vector<double>>& points, double power,
                                    std::vector<double> mass) {
  const std::size_t n = points.size();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sq = 0.0;
      for (std::size_t c = 0; c < points[i].size(); ++c) {
        sq += (points[i][c] - points[j][c]) * (points[i][c] - points[j][c]);
      }
      dist[i][j] = dist[j][i] = std::pow(std::sqrt(sq), power);
    }
  }
  return QuasiMetricSpace::from_matrix(dist, std::move(mass));
}

}  // namespace detail

/// A random space with between 1 and max_points points: random points on a
/// line or in the square (metric), grids under l1/linf/l2, or snowflaked
/// quasimetrics d^gamma with gamma in [1.2, 2] (kappa > 1).
inline GeneratedSpace random_space(Rng& rng, std::size_t max_points) {
  const std::size_t kind = detail::pick(rng, 0, 4);
  const std::size_t n = detail::pick(rng, std::min<std::size_t>(2, max_points), max_points);
  if (kind == 2) {
    const std::size_t rows = detail::pick(rng, 1, std::max<std::size_t>(1, n / 2));
    const std::size_t cols = std::max<std::size_t>(1, n / rows);
    const auto metric = static_cast<GridMetric>(detail::pick(rng, 0, 2));
    static const char* names[] = {"grid-l1", "grid-linf", "grid-l2"};
    std::vector<std::size_t> shape = cols == 1 ? std::vector<std::size_t>{rows}
                                               : std::vector<std::size_t>{rows, cols};
    return {names[static_cast<int>(metric)],
            QuasiMetricSpace::grid(shape, metric, detail::random_masses(rng, rows * cols))};
  }
  const std::size_t dim = kind == 0 ? 1 : 2;
  std::vector<std::vector<double>> points(n, std::vector<double>(dim));
  for (auto& pt : points) {
    for (double& c : pt) c = detail::uniform(rng, 0.0, 10.0);
  }
  double power = 1.0;
  std::string name = kind == 0 ? "line" : "plane";
  if (kind >= 3) {
    power = detail::uniform(rng, 1.2, 2.0);
    name = kind == 3 ? "plane-snowflake" : "line-snowflake";
    if (kind == 4) {
      for (auto& pt : points) pt.resize(1);
    }
  }
  return {name, detail::from_points(points, power, detail::random_masses(rng, n))};
}

/// Log-uniform array weight or a power weight (d(c, y) + delta)^alpha.
/// With `allow_zeros`, a third of the weights vanish on a random subset.
inline WeightVector random_weight(Rng& rng, const QuasiMetricSpace& space, bool allow_zeros) {
  const std::size_t n = space.size();
  std::vector<double> w(n);
  if (detail::pick(rng, 0, 1) == 0) {
    for (double& x : w) x = detail::log_uniform(rng, std::exp(-3.0), std::exp(3.0));
  } else {
    const double alpha = detail::uniform(rng, -1.5, 1.5);
    const double delta = detail::uniform(rng, 0.1, 1.0);
    const std::size_t c = detail::pick(rng, 0, n - 1);
    for (std::size_t y = 0; y < n; ++y) w[y] = std::pow(space.distance(c, y) + delta, alpha);
  }
  if (allow_zeros && n > 1 && detail::pick(rng, 0, 2) == 0) {
    const std::size_t keep = detail::pick(rng, 0, n - 1);
    for (std::size_t y = 0; y < n; ++y) {
      if (y != keep && detail::pick(rng, 0, 1) == 0) w[y] = 0.0;
    }
  }
  return WeightVector(std::move(w));
}

/// Nonnegative field with random sparsity and heavy-tailed values.
inline FieldVector random_field(Rng& rng, std::size_t n) {
  std::vector<double> f(n);
  const double zero_rate = detail::uniform(rng, 0.0, 0.7);
  for (double& x : f) {
    x = detail::uniform(rng, 0.0, 1.0) < zero_rate ? 0.0 : detail::log_uniform(rng, 0.01, 100.0);
  }
  if (std::all_of(f.begin(), f.end(), [](double x) { return x == 0.0; })) {
    f[detail::pick(rng, 0, n - 1)] = 1.0;
  }
  return FieldVector(std::move(f));
}

}  // namespace hlmax

#endif  // HLMAX_RANDOM_HPP
