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

#include "hlmax/czdecomp.hpp"
#include "hlmax/random.hpp"
#include "oracles.hpp"

using namespace hlmax;

namespace {

QuasiMetricSpace line4() { return QuasiMetricSpace::grid({4}, GridMetric::l1); }

Ball whole(const QuasiMetricSpace& s) {
  double far = 0.0;
  for (std::size_t y = 0; y < s.size(); ++y) far = std::max(far, s.distance(0, y));
  return Ball{0, 2.0 * far + 1.0};
}

double space_average(const QuasiMetricSpace& s, const FieldVector& f) {
  oracle::Set all(s.size());
  for (std::size_t y = 0; y < all.size(); ++y) all[y] = y;
  return oracle::average(s, f.vector(), all);
}

// Re-derives every promised property without the library's own checker:
// level set from the brute-force maximal function, covering by direct
// distance tests, and property iii over a dense sweep of real radii.
std::vector<std::string> independent_check(const QuasiMetricSpace& s, const CZDecomposition& dec,
                                           const FieldVector& f, const CZConfig& config) {
  std::vector<std::string> bad;
  const double lambda = dec.level;
  const auto mf = oracle::maximal(s, f.vector());
  std::vector<std::size_t> omega;
  for (std::size_t x = 0; x < s.size(); ++x) {
    if (mf[x] > lambda) omega.push_back(x);
  }
  if (omega != dec.omega) bad.push_back("omega differs from brute force");
  std::vector<int> owner(s.size(), -1);
  for (std::size_t i = 0; i < dec.selected.size(); ++i) {
    const auto& b = dec.selected[i];
    if (oracle::open_ball(s, b.ball.center, b.ball.radius) != b.members) bad.push_back("members differ");
    for (std::size_t y : b.members) {
      if (owner[y] >= 0) bad.push_back("selected balls overlap");
      owner[y] = static_cast<int>(i);
      if (mf[y] <= lambda) bad.push_back("selected ball leaves omega");
    }
    if (!(oracle::average(s, f.vector(), b.members) > lambda)) bad.push_back("average not above level");
  }
  for (std::size_t x : omega) {
    bool covered = false;
    for (const auto& b : dec.selected) covered = covered || s.distance(b.ball.center, x) < config.theta * b.ball.radius;
    if (!covered) bad.push_back("omega point outside every theta-dilate");
  }
  const auto radii = oracle::radius_sweep(s);
  for (const auto& b : dec.selected) {
    for (std::size_t c = 0; c < s.size(); ++c) {
      for (double r : radii) {
        if (r < config.eta * b.ball.radius) continue;
        const auto outer = oracle::open_ball(s, c, r);
        if (!std::includes(outer.begin(), outer.end(), b.members.begin(), b.members.end())) continue;
        const auto grown = oracle::open_ball(s, c, config.eta * r);
        if (oracle::average(s, f.vector(), grown) > lambda * (1 + 1e-12)) {
          bad.push_back("dilated enclosing ball above level");
        }
      }
    }
  }
  return bad;
}

}  // namespace

TEST(CZ, ConfigConstants) {
  const BallIndex index(line4());
  const auto config = make_cz_config(space_profile(index));
  EXPECT_EQ(config.theta, 5.0);
  EXPECT_EQ(config.eta, 7.0);
  const double required = 2.0 * std::pow(140.0, std::log2(3.0));
  EXPECT_NEAR(config.required_a(), required, 1e-9 * required);
  EXPECT_EQ(config.a, std::ceil(required));
  EXPECT_THROW(make_cz_config(space_profile(index), 1.0), InputError);
  EXPECT_THROW(make_cz_config(space_profile(index), std::nullopt, 0.5), InputError);
}

TEST(CZ, LineFourSpike) {
  const BallIndex index(line4());
  const auto config = make_cz_config(space_profile(index));
  const FieldVector f({8, 0, 0, 0});
  const auto dec = cz_decompose(index, whole(index.space()), f, 4.0, config);
  EXPECT_EQ(dec.omega, (std::vector<std::size_t>{0}));
  ASSERT_EQ(dec.selected.size(), 1u);
  EXPECT_EQ(dec.selected[0].members, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(verify_cz_properties(index, dec, f, config).violations.empty());
  EXPECT_TRUE(independent_check(index.space(), dec, f, config).empty());
}

TEST(CZ, ConstantFieldAtItsLevel) {
  const BallIndex index(line4());
  const auto dec =
      cz_decompose(index, whole(index.space()), FieldVector({2, 2, 2, 2}), 2.0, make_cz_config(space_profile(index)));
  EXPECT_TRUE(dec.omega.empty());
  EXPECT_TRUE(dec.selected.empty());
}

TEST(CZ, Preconditions) {
  const BallIndex index(line4());
  const auto config = make_cz_config(space_profile(index));
  const FieldVector f({8, 0, 0, 0});
  EXPECT_THROW(cz_decompose(index, whole(index.space()), f, 0.0, config), PreconditionError);
  try {
    cz_decompose(index, Ball{0, 1}, f, 4.0, config);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("level below base average"), std::string::npos);
  }
  EXPECT_THROW(cz_decompose(index, whole(index.space()), FieldVector({1, 1}), 4.0, config), InputError);
}

TEST(CZ, MultiLevelSpikeWithSmallBase) {
  const BallIndex index(line4());
  const FieldVector f({8, 0, 0, 0});
  const auto profile = space_profile(index);
  EXPECT_THROW(multi_level_decompose(index, whole(index.space()), f, make_cz_config(profile, 4.0)), InputError);
  const auto config = make_cz_config(profile, 4.0, std::nullopt, true);
  const auto family = multi_level_decompose(index, whole(index.space()), f, config);
  EXPECT_EQ(family.k0, 1);
  ASSERT_EQ(family.levels.size(), 1u);
  EXPECT_EQ(family.levels[0].decomposition.omega, (std::vector<std::size_t>{0}));
  ASSERT_EQ(family.levels[0].decomposition.selected.size(), 1u);
  EXPECT_EQ(family.levels[0].decomposition.selected[0].members, (std::vector<std::size_t>{0}));
  EXPECT_EQ(family.levels[0].e_sets[0], (std::vector<std::size_t>{0}));
}

TEST(CZ, MultiLevelConstantIsEmpty) {
  const BallIndex index(line4());
  const auto family = multi_level_decompose(index, whole(index.space()), FieldVector({3, 3, 3, 3}),
                                            make_cz_config(space_profile(index)));
  EXPECT_TRUE(family.levels.empty());
  EXPECT_GE(std::pow(family.a, family.k0), 3.0);
  EXPECT_THROW(multi_level_decompose(index, Ball{1, 1}, FieldVector({3, 0, 0, 0}), make_cz_config(space_profile(index))),
               PreconditionError);
}

TEST(CZ, Deterministic) {
  Rng rng(8);
  const auto g = random_space(rng, 20);
  const BallIndex index(g.space);
  const auto f = random_field(rng, g.space.size());
  const auto config = make_cz_config(space_profile(index));
  const double lambda = 1.5 * std::max(space_average(g.space, f), 1e-3);
  const auto a = cz_decompose(index, whole(g.space), f, lambda, config);
  const auto b = cz_decompose(index, whole(g.space), f, lambda, config);
  ASSERT_EQ(a.selected.size(), b.selected.size());
  for (std::size_t i = 0; i < a.selected.size(); ++i) EXPECT_EQ(a.selected[i].members, b.selected[i].members);
}

TEST(CZProperty, SingleLevelAgainstIndependentChecker) {
  Rng rng(600);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = random_space(rng, 16);
    const BallIndex index(g.space);
    const auto f = random_field(rng, g.space.size());
    const auto config = make_cz_config(space_profile(index));
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, index.size() - 1)(rng);
    const Ball base = index[pick].ball;
    const double floor = std::max(oracle::average(g.space, f.vector(), oracle::open_ball(g.space, base.center, base.radius)),
                                  space_average(g.space, f));
    const double lambda = floor * std::uniform_real_distribution<double>(1.0, 6.0)(rng);
    const auto dec = cz_decompose(index, base, f, lambda, config);
    const auto report = verify_cz_properties(index, dec, f, config);
    EXPECT_TRUE(report.violations.empty()) << g.kind << ": " << report.violations.front().detail;
    const auto bad = independent_check(g.space, dec, f, config);
    EXPECT_TRUE(bad.empty()) << g.kind << ": " << bad.front();
  }
}

TEST(CZProperty, MultiLevelAgainstIndependentChecker) {
  Rng rng(601);
  int with_levels = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = random_space(rng, 16);
    const BallIndex index(g.space);
    const auto f = random_field(rng, g.space.size());
    const auto profile = space_profile(index);
    for (const auto& config : {make_cz_config(profile), make_cz_config(profile, 2.0, std::nullopt, true)}) {
      if (oracle::average(g.space, f.vector(), oracle::open_ball(g.space, 0, 1e300)) <= 0.0) continue;
      const auto family = multi_level_decompose(index, whole(g.space), f, config);
      EXPECT_TRUE(verify_disjointing(index, family, config).empty() || config.a < config.required_a());
      with_levels += family.levels.empty() ? 0 : 1;
      std::vector<int> owner(g.space.size(), -1);
      const auto mf = oracle::maximal(g.space, f.vector());
      for (const auto& level : family.levels) {
        for (std::size_t i = 0; i < level.e_sets.size(); ++i) {
          const auto& b = level.decomposition.selected[i];
          for (std::size_t y : b.members) {
            const bool above_next = mf[y] > level.threshold * family.a;
            EXPECT_EQ(std::binary_search(level.e_sets[i].begin(), level.e_sets[i].end(), y), !above_next);
          }
          for (std::size_t y : level.e_sets[i]) {
            EXPECT_LT(owner[y], 0) << "E sets overlap";
            owner[y] = level.k;
          }
        }
      }
    }
  }
  EXPECT_GT(with_levels, 20);
}
