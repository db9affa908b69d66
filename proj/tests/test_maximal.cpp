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
#include <gtest/gtest.h>

#include "hlmax/maximal.hpp"
#include "hlmax/random.hpp"
#include "oracles.hpp"

using namespace hlmax;

namespace {

QuasiMetricSpace line4() { return QuasiMetricSpace::grid({4}, GridMetric::l1); }

void expect_values(const FieldVector& got, const std::vector<double>& want, double tol = 1e-15) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], tol * std::max(1.0, want[i])) << i;
}

}  // namespace

TEST(Maximal, ConstantIsFixed) {
  expect_values(hl_maximal(line4(), FieldVector({3, 3, 3, 3})), {3, 3, 3, 3});
}

TEST(Maximal, LineFourSpike) {
  expect_values(hl_maximal(line4(), FieldVector({4, 0, 0, 0})), {4, 2, 4.0 / 3.0, 1});
  expect_values(hl_maximal(line4(), FieldVector({8, 0, 0, 0})), {8, 4, 8.0 / 3.0, 2});
}

TEST(Maximal, SinglePoint) {
  const auto s = QuasiMetricSpace::from_matrix({{0}}, {0.5});
  expect_values(hl_maximal(s, FieldVector({7})), {7});
}

TEST(Maximal, RestrictedToWholeSpace) {
  const FieldVector f({1, 5, 0, 2});
  EXPECT_EQ(restricted_maximal(line4(), f, Ball{0, 10}), hl_maximal(line4(), f));
}

TEST(Maximal, RestrictedExamples) {
  const auto a = restricted_maximal(line4(), FieldVector({4, 4, 0, 0}), Ball{0, 2});
  EXPECT_DOUBLE_EQ(a[2], 8.0 / 3.0);
  expect_values(restricted_maximal(line4(), FieldVector({1, 1, 1, 1}), Ball{0, 1}), {1, 0.5, 1.0 / 3.0, 0.25});
}

TEST(Maximal, OrliczLineFour) {
  const auto m = orlicz_maximal(line4(), FieldVector({2, 0, 0, 0}), YoungFunction::power(2));
  EXPECT_NEAR(m[0], 2.0, 1e-12);
  // (1/2 * 4)^(1/2) on {0,1}, the best ball through 1
  EXPECT_NEAR(m[1], std::sqrt(2.0), 1e-12);
}

TEST(Maximal, OrliczPowerOneIsHardyLittlewood) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_space(rng, 16);
    const BallIndex index(g.space);
    const auto f = random_field(rng, g.space.size());
    const auto a = orlicz_maximal(index, f, YoungFunction::power(1));
    const auto b = hl_maximal(index, f);
    for (std::size_t y = 0; y < f.size(); ++y) EXPECT_NEAR(a[y], b[y], 1e-12 * b[y]);
  }
}

TEST(Maximal, OrliczConstant) {
  for (double q : {1.5, 2.0, 7.0}) {
    const auto m = orlicz_maximal(line4(), FieldVector({2.5, 2.5, 2.5, 2.5}), YoungFunction::power(q));
    for (std::size_t y = 0; y < 4; ++y) EXPECT_NEAR(m[y], 2.5, 1e-12);
  }
}

TEST(Maximal, RejectsBadFields) {
  EXPECT_THROW(FieldVector({1, -1}), InputError);
  EXPECT_THROW(FieldVector({1, NAN}), InputError);
  EXPECT_THROW(hl_maximal(line4(), FieldVector({1, 1})), InputError);
}

TEST(MaximalProperty, MatchesBruteForce) {
  Rng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = random_space(rng, 18);
    const auto f = random_field(rng, g.space.size());
    const auto want = oracle::maximal(g.space, f.vector());
    expect_values(hl_maximal(g.space, f), want, 1e-12);
  }
}

TEST(MaximalProperty, OrliczMatchesBisection) {
  Rng rng(78);
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = random_space(rng, 10);
    const auto f = random_field(rng, g.space.size());
    const auto phi = YoungFunction::power_log(2.0, 1.0);
    const auto got = orlicz_maximal(g.space, f, phi);
    std::vector<double> want(f.size(), 0.0);
    for (const auto& b : oracle::member_sets(g.space)) {
      const double n = oracle::luxemburg(g.space, f.vector(), b, oracle::measure(g.space, b),
                                         [&](double t) { return phi(t); });
      for (std::size_t y : b) want[y] = std::max(want[y], n);
    }
    expect_values(got, want, 1e-9);
  }
}

TEST(MaximalProperty, SublinearAndPointwiseAboveF) {
  Rng rng(79);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_space(rng, 20);
    const BallIndex index(g.space);
    const auto f = random_field(rng, g.space.size());
    const auto h = random_field(rng, g.space.size());
    std::vector<double> sum(f.size());
    for (std::size_t y = 0; y < f.size(); ++y) sum[y] = f[y] + h[y];
    const auto mf = hl_maximal(index, f);
    const auto mh = hl_maximal(index, h);
    const auto ms = hl_maximal(index, FieldVector(sum));
    for (std::size_t y = 0; y < f.size(); ++y) {
      EXPECT_GE(mf[y], f[y] * (1 - 1e-15));
      EXPECT_LE(ms[y], (mf[y] + mh[y]) * (1 + 1e-12));
    }
  }
}
