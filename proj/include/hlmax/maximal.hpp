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
#ifndef HLMAX_MAXIMAL_HPP
#define HLMAX_MAXIMAL_HPP

// Exact uncentered Hardy-Littlewood, restricted and Orlicz maximal
// operators. Suprema over balls containing a point are maxima over the
// canonical balls of the space, so no discretization error is introduced.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hlmax/errors.hpp"
#include "hlmax/orlicz.hpp"
#include "hlmax/space.hpp"

namespace hlmax {

/// Nonnegative finite values, one per point.
class FieldVector {
 public:
  FieldVector() = default;
  explicit FieldVector(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
        throw InputError("field value at index " + std::to_string(i) +
                         " must be finite and nonnegative");
      }
    }
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  friend bool operator==(const FieldVector&, const FieldVector&) = default;

 private:
  std::vector<double> values_;
};

inline void require_length(const QuasiMetricSpace& space, const FieldVector& f, const char* name) {
  if (f.size() != space.size()) {
    throw InputError(std::string("dimension mismatch: ") + name + " has " +
                     std::to_string(f.size()) + " entries, space has " +
                     std::to_string(space.size()) + " points");
  }
}

/// (Mf)(x) = max over canonical balls B containing x of (1/mu(B)) sum_B f mass.
inline FieldVector hl_maximal(const BallIndex& index, const FieldVector& f) {
  require_length(index.space(), f, "f");
  const auto sums = index.sums(f.values());
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i : index.distinct()) {
    const double average = sums[i] / index[i].measure;
    for (std::size_t y : index.members(i)) out[y] = std::max(out[y], average);
  }
  return FieldVector(std::move(out));
}

inline FieldVector hl_maximal(const QuasiMetricSpace& space, const FieldVector& f) {
  return hl_maximal(BallIndex(space), f);
}

/// M(f chi_B), evaluated on the whole space.
inline FieldVector restricted_maximal(const BallIndex& index, const FieldVector& f, const Ball& ball) {
  require_length(index.space(), f, "f");
  std::vector<double> cut(f.size(), 0.0);
  for (std::size_t y = 0; y < f.size(); ++y) {
    if (ball_contains(index.space(), ball, y)) cut[y] = f[y];
  }
  return hl_maximal(index, FieldVector(std::move(cut)));
}

inline FieldVector restricted_maximal(const QuasiMetricSpace& space, const FieldVector& f,
                                      const Ball& ball) {
  return restricted_maximal(BallIndex(space), f, ball);
}

/// (M_Phi f)(x) = max over canonical balls B containing x of ||f||_{Phi,B}.
inline FieldVector orlicz_maximal(const BallIndex& index, const FieldVector& f,
                                  const YoungFunction& phi) {
  require_length(index.space(), f, "f");
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i : index.distinct()) {
    const auto members = index.members(i);
    if (std::none_of(members.begin(), members.end(), [&](std::size_t y) { return f[y] > 0.0; })) {
      continue;
    }
    const double norm = luxemburg_norm(index.space(), f.values(), members, index[i].measure, phi);
    for (std::size_t y : members) out[y] = std::max(out[y], norm);
  }
  return FieldVector(std::move(out));
}

inline FieldVector orlicz_maximal(const QuasiMetricSpace& space, const FieldVector& f,
                                  const YoungFunction& phi) {
  return orlicz_maximal(BallIndex(space), f, phi);
}

}  // namespace hlmax

#endif  // HLMAX_MAXIMAL_HPP
