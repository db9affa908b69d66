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

#include <cmath>
#include <set>

#include "hlmax/random.hpp"
#include "hlmax/space.hpp"
#include "oracles.hpp"

using namespace hlmax;

namespace {

QuasiMetricSpace line4() { return QuasiMetricSpace::grid({4}, GridMetric::l1); }

QuasiMetricSpace two_point() { return QuasiMetricSpace::from_matrix({{0, 1}, {1, 0}}, {1, 1}); }

std::set<oracle::Set> index_sets(const BallIndex& index) {
  std::set<oracle::Set> out;
  for (std::size_t i = 0; i < index.size(); ++i) {
    auto m = index.members(i);
    oracle::Set s(m.begin(), m.end());
    std::sort(s.begin(), s.end());
    out.insert(s);
  }
  return out;
}

}  // namespace

TEST(Space, LineFourGeometry) {
  const auto s = line4();
  ASSERT_EQ(s.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(s.mass(i), 1.0);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(s.distance(i, j), std::abs(double(i) - double(j)));
  }
  EXPECT_EQ(s.total_mass(), 4.0);
}

TEST(Space, GridMetrics) {
  const auto l1 = QuasiMetricSpace::grid({2, 2}, GridMetric::l1);
  const auto linf = QuasiMetricSpace::grid({2, 2}, GridMetric::linf);
  const auto l2 = QuasiMetricSpace::grid({2, 2}, GridMetric::l2);
  // points (0,0) and (1,1) are indices 0 and 3
  EXPECT_DOUBLE_EQ(l1.distance(0, 3), 2.0);
  EXPECT_DOUBLE_EQ(linf.distance(0, 3), 1.0);
  EXPECT_DOUBLE_EQ(l2.distance(0, 3), std::sqrt(2.0));
}

TEST(Space, ValidationNamesTheProblem) {
  EXPECT_NO_THROW(two_point());
  try {
    QuasiMetricSpace::from_matrix({{0, 1}, {1, 0}}, {1, 0});
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("nonpositive mass at index 1"), std::string::npos);
  }
  EXPECT_THROW(QuasiMetricSpace::from_matrix({{0, 1}, {2, 0}}, {1, 1}), InputError);
  EXPECT_THROW(QuasiMetricSpace::from_matrix({{0, -1}, {-1, 0}}, {1, 1}), InputError);
  EXPECT_THROW(QuasiMetricSpace::from_matrix({{0, 0}, {0, 0}}, {1, 1}), InputError);
  EXPECT_THROW(QuasiMetricSpace::from_matrix({{0, 1}, {1, 0}}, {1}), InputError);
  EXPECT_THROW(QuasiMetricSpace::from_matrix({}, {}), InputError);
  EXPECT_THROW(QuasiMetricSpace::from_matrix({{0, NAN}, {NAN, 0}}, {1, 1}), InputError);
  EXPECT_THROW(QuasiMetricSpace::grid({4}, GridMetric::l1, {1, 1, 1}), InputError);
}

TEST(Space, BallMembershipIsOpen) {
  const auto s = line4();
  EXPECT_EQ(ball_members(s, Ball{1, 2}), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(ball_members(s, Ball{0, 1}), (std::vector<std::size_t>{0}));
  EXPECT_EQ(ball_members(s, Ball{0, 5}), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_DOUBLE_EQ(ball_measure(s, Ball{1, 2}), 3.0);
}

TEST(Space, Dilation) {
  const auto s = line4();
  const Ball b = dilate_ball(Ball{1, 2}, 1.0);
  EXPECT_EQ(b.center, 1u);
  EXPECT_EQ(b.radius, 2.0);
  EXPECT_EQ(ball_members(s, dilate_ball(Ball{0, 1}, 5.0)), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_THROW(dilate_ball(Ball{0, 1}, 0.5), InputError);
}

TEST(Space, CanonicalBallCounts) {
  // One canonical ball per (center, distinct member set): 1+2+2+... on LINE4.
  const BallIndex line(line4());
  EXPECT_EQ(line.size(), 14u);
  EXPECT_EQ(line.distinct().size(), 9u);
  const BallIndex one(QuasiMetricSpace::from_matrix({{0}}, {2.0}));
  EXPECT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].ball.radius, 1.0);
  const BallIndex two(two_point());
  EXPECT_EQ(two.size(), 4u);
  EXPECT_EQ(two.distinct().size(), 3u);
}

TEST(Space, CanonicalRadiusIsLargestRealizing) {
  const BallIndex index(line4());
  for (const auto& b : index.balls()) {
    const auto members = ball_members(index.space(), b.ball);
    EXPECT_EQ(members.size(), b.count);
    // any larger radius changes the set, unless it is already everything
    if (b.count < 4) {
      EXPECT_GT(ball_members(index.space(), Ball{b.ball.center, b.ball.radius * (1 + 1e-12)}).size(), b.count);
    }
  }
}

TEST(Space, ProfileLineFour) {
  const auto p = space_profile(line4());
  EXPECT_EQ(p.kappa, 1.0);
  EXPECT_DOUBLE_EQ(p.c_mu, 3.0);
  EXPECT_DOUBLE_EQ(p.d_mu, std::log2(3.0));
  EXPECT_DOUBLE_EQ(p.engulf, 3.0);
  EXPECT_DOUBLE_EQ(space_profile(two_point()).c_mu, 2.0);
}

TEST(Space, EngulfingOnSmallSpaces) {
  for (const auto& s : {line4(), two_point(), QuasiMetricSpace::from_matrix({{0}}, {1.0})}) {
    const BallIndex index(s);
    EXPECT_TRUE(check_engulfing(index, space_profile(index)).empty());
  }
}

TEST(SpaceProperty, MatchesDenseRadiusOracle) {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const auto generated = random_space(rng, 14);
    const auto& s = generated.space;
    const BallIndex index(s);
    const auto sets = oracle::member_sets(s);
    EXPECT_EQ(index_sets(index), std::set<oracle::Set>(sets.begin(), sets.end())) << generated.kind;
    EXPECT_EQ(index.distinct().size(), sets.size());

    const auto profile = space_profile(index);
    const double k = oracle::kappa(s);
    EXPECT_GE(profile.kappa, k);
    EXPECT_LE(profile.kappa, k * (1 + 1e-12));
    EXPECT_NEAR(profile.c_mu, oracle::doubling(s), 1e-12 * profile.c_mu) << generated.kind;
    EXPECT_DOUBLE_EQ(profile.d_mu, std::log2(profile.c_mu));
    EXPECT_DOUBLE_EQ(profile.engulf, profile.kappa * (2 * profile.kappa + 1));
  }
}

TEST(SpaceProperty, EngulfingAndDilationHold) {
  Rng rng(202);
  for (int trial = 0; trial < 40; ++trial) {
    const auto generated = random_space(rng, 20);
    const BallIndex index(generated.space);
    const auto profile = space_profile(index);
    const double theta = 4 * profile.kappa * profile.kappa + profile.kappa;
    const std::vector<double> lambdas{1.0, 1.5, 2.0, 3.0, profile.engulf, theta, 17.0};
    EXPECT_TRUE(check_engulfing(index, profile).empty()) << generated.kind;
    EXPECT_TRUE(check_dilation_bound(index, profile, lambdas).empty()) << generated.kind;
  }
}

TEST(SpaceProperty, KappaOverrideIsRespected) {
  const BallIndex index(line4());
  const auto p = space_profile(index, 2.0);
  EXPECT_EQ(p.kappa, 2.0);
  EXPECT_DOUBLE_EQ(p.engulf, 10.0);
  EXPECT_THROW(space_profile(index, 0.5), InputError);
}
