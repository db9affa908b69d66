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

#include <string>

#include "hlmax/io.hpp"
#include "hlmax/suite.hpp"

using namespace hlmax;
using io::Json;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

bool mentions(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST(IoSpace, GridAndExplicit) {
  const auto line = io::parse_space(Json::parse(R"({"type":"grid","shape":[4],"metric":"l1","mass":"uniform"})"));
  EXPECT_EQ(line.size(), 4u);
  EXPECT_EQ(line.distance(0, 3), 3.0);
  const auto plane = io::parse_space(Json::parse(R"({"type":"grid","shape":[2,3],"metric":"linf","mass":[1,2,3,4,5,6]})"));
  EXPECT_EQ(plane.size(), 6u);
  EXPECT_EQ(plane.mass(5), 6.0);
  const auto two = io::parse_space(Json::parse(R"({"type":"explicit","dist":[[0,1],[1,0]],"mass":[1,1]})"));
  EXPECT_EQ(two.total_mass(), 2.0);
}

TEST(IoSpace, ErrorsNameTheField) {
  EXPECT_TRUE(mentions(error_of([] { io::parse_space(Json::parse(R"({"type":"explicit","dist":[[0,1],[1,0]],"mass":[1,0]})")); }),
                       "nonpositive mass at index 1"));
  EXPECT_TRUE(mentions(error_of([] { io::parse_space(Json::parse(R"({"type":"explicit","dist":[[0,-1],[1,0]],"mass":[1,1]})")); }),
                       "space.dist[0][1]"));
  EXPECT_TRUE(mentions(error_of([] { io::parse_space(Json::parse(R"({"type":"explicit","dist":[[0,1],[1,0]]})")); }),
                       "space.mass"));
  EXPECT_TRUE(mentions(error_of([] { io::parse_space(Json::parse(R"({"type":"grid","shape":[4],"metric":"l3"})")); }),
                       "space.metric"));
  EXPECT_TRUE(mentions(error_of([] { io::parse_space(Json::parse(R"({"type":"blob"})")); }), "space.type"));
  EXPECT_TRUE(mentions(error_of([] { io::parse_space(Json::parse(R"({"type":"grid","shape":[-2]})")); }), "space.shape[0]"));
  EXPECT_TRUE(mentions(error_of([] { io::parse_space(Json::parse(R"({"type":"grid","shape":[2],"mass":[1,"x"]})")); }),
                       "space.mass[1]"));
}

TEST(IoWeight, Forms) {
  const auto line = QuasiMetricSpace::grid({4}, GridMetric::l1);
  EXPECT_EQ(io::parse_weight(Json::parse("[1,2,3,4]"), line).vector(), (std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(io::parse_weight(Json::parse(R"({"type":"array","values":[1,1,1,9]})"), line)[3], 9.0);
  const auto power = io::parse_weight(Json::parse(R"({"type":"power","alpha":2,"center":1,"offset":0.5})"), line);
  EXPECT_DOUBLE_EQ(power[3], 6.25);
  EXPECT_DOUBLE_EQ(power[1], 0.25);
  EXPECT_TRUE(mentions(error_of([&] { io::parse_weight(Json::parse(R"({"type":"power","alpha":-1,"center":0})"), line); }),
                       "weight.offset"));
  EXPECT_TRUE(mentions(error_of([&] { io::parse_weight(Json::parse("[1,2]"), line, "--w"); }), "--w"));
  EXPECT_TRUE(mentions(error_of([&] { io::parse_weight(Json::parse("[0,0,0,0]"), line, "--w"); }), "--w"));
  EXPECT_TRUE(mentions(error_of([&] { io::parse_weight(Json::parse(R"({"type":"power","alpha":1,"center":9})"), line); }),
                       "weight.center"));
}

TEST(IoPhi, InlineAndObject) {
  EXPECT_EQ(io::parse_phi(Json("power:2")).describe(), "power:2");
  EXPECT_EQ(io::parse_phi(Json("powerlog:2:1")).describe(), "powerlog:2:1");
  EXPECT_EQ(io::parse_phi(Json::parse(R"({"family":"powerlog","s":3,"a":0.5})")).describe(), "powerlog:3:0.5");
  EXPECT_TRUE(mentions(error_of([] { io::parse_phi(Json("power:1")); }), "phi.s"));
  EXPECT_TRUE(mentions(error_of([] { io::parse_phi(Json("power:abc")); }), "phi.s"));
  EXPECT_TRUE(mentions(error_of([] { io::parse_phi(Json("cosh:2")); }), "phi"));
  EXPECT_TRUE(mentions(error_of([] { io::parse_phi(Json::parse(R"({"family":"exp","s":2})")); }), "phi.family"));
  EXPECT_TRUE(mentions(error_of([] { io::parse_phi(Json::parse(R"({"family":"powerlog","s":2})")); }), "phi.a"));
}

TEST(IoPhi, SymbolicExponents) {
  EXPECT_DOUBLE_EQ(resolve_phi("power:p'", 3).exponent(), 1.5);
  EXPECT_DOUBLE_EQ(resolve_phi("power:2p'", 3).exponent(), 3.0);
  EXPECT_DOUBLE_EQ(resolve_phi("power:p", 3).exponent(), 3.0);
  EXPECT_EQ(resolve_phi("powerlog:p':1", 2).describe(), "powerlog:2:1");
  EXPECT_THROW(resolve_phi("power:xp'", 2), InputError);
}

TEST(IoWriters, CzReportShape) {
  const BallIndex index(QuasiMetricSpace::grid({4}, GridMetric::l1));
  const auto dec = cz_decompose(index, Ball{0, 6}, FieldVector({8, 0, 0, 0}), 4.0, make_cz_config(space_profile(index)));
  const Json j = io::to_json(dec);
  EXPECT_EQ(j["lambda"], 4.0);
  EXPECT_EQ(j["omega"], Json::parse("[0]"));
  ASSERT_EQ(j["balls"].size(), 1u);
  EXPECT_EQ(j["balls"][0]["members"], Json::parse("[0]"));
  EXPECT_EQ(j["balls"][0]["center"], 0);
}

TEST(IoWriters, DivergentTailIsNull) {
  const Json j = io::to_json(alpha_p(YoungFunction::power(2), LebesgueExponent(2)));
  EXPECT_TRUE(j["divergent"].get<bool>());
  EXPECT_TRUE(j["value"].is_null());
}

TEST(Suite, ExplicitInstanceAndDeterminism) {
  const Json manifest = Json::parse(R"({
    "seed": 3,
    "instances": [{"name": "line4", "space": {"type":"grid","shape":[4]},
                   "w": [1,1,1,9], "sigma": [9,1,1,1], "p": [2, 3],
                   "phi": ["power:p'", "powerlog:p':1"]}],
    "random": {"count": 3, "max_points": 10, "p": [1.5, 4], "phi": ["power:2p'"]},
    "opnorm": {"random": true, "samples": 4}
  })");
  const auto a = run_suite(manifest);
  const auto b = run_suite(manifest);
  EXPECT_EQ(a.violations, 0u);
  EXPECT_EQ(a.json.dump(), b.json.dump());
  EXPECT_EQ(a.json["instances"], 4);
  EXPECT_EQ(a.json["results"][0]["exponents"].size(), 2u);
  const auto c = run_suite(manifest, 4);
  EXPECT_NE(a.json.dump(), c.json.dump());
}

TEST(Suite, ManifestErrors) {
  EXPECT_TRUE(mentions(error_of([] { run_suite(Json::parse(R"({"random": {"count": 1, "p": [1], "phi": ["power:2"]}})")); }),
                       "exponent p"));
  EXPECT_TRUE(mentions(error_of([] { run_suite(Json::parse(R"({"instances": [{"space": {"type":"grid","shape":[2]}}]})")); }),
                       "manifest.instances[0].w"));
  EXPECT_TRUE(mentions(error_of([] { run_suite(Json::parse(R"({"random": {"count": 1, "p": [2], "phi": ["power:q"]}})")); }),
                       "manifest.random.phi"));
}
