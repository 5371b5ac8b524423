// Copyright 2026 The screenkit Authors
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

#include "fixtures.hpp"
#include "oracles.hpp"
#include "screenkit.hpp"

namespace screenkit {
namespace {

TEST(JointVsProductive, RandomSuitePasses) {
  for (std::size_t k = 0; k < 200; ++k) {
    const ScreeningInstance inst = suite_instance(7, k);
    const TheoremReport rep = verify_theorem1(inst);
    ASSERT_TRUE(rep.asserted) << k;
    EXPECT_TRUE(rep.pass) << k;
    EXPECT_GE(rep.gap, -1e-9);
    EXPECT_LE(rep.gap, kValueTol);
    EXPECT_NEAR(expected_principal_payoff(inst, rep.witness_mechanism), rep.v_productive, 1e-9);
    EXPECT_TRUE(check_ic(inst, rep.witness_mechanism, IcDirection::all).empty());
  }
}

TEST(JointVsProductive, CostlyPairIsDiagnosticOnly) {
  const TheoremReport rep = verify_theorem1(fixtures::costly_pair());
  EXPECT_FALSE(rep.assumption_status.passes("1.3"));
  EXPECT_FALSE(rep.asserted);
  EXPECT_TRUE(rep.pass);
  EXPECT_GE(rep.gap, 0.125 - 1e-12);
}

TEST(JointVsProductive, BaselineOnlyInstrumentPasses) {
  ScreeningInstance inst = fixtures::binary_joint(1.0);
  const TheoremReport rep = verify_theorem1(inst);
  EXPECT_TRUE(rep.asserted);
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.gap, 0.0, 1e-12);
}

PathMechanism costly_pair_path() {
  PathMechanism pm;
  pm.levels = {0, 1};
  pm.path_b = {0, 1};
  pm.mass = {0.5, 0.5};
  pm.options = {{1, 0, 0.0}, {0, 1, -1.0}};
  return pm;
}

TEST(Shift, BaselineMechanismIsUnchanged) {
  const ScreeningInstance inst = fixtures::costly_pair();
  PathMechanism pm = costly_pair_path();
  pm.options = {{0, 0, 0.0}, {1, 0, 1.0}};
  const ShiftOutcome out = shift_mechanism(inst, pm);
  EXPECT_EQ(out.shifted.options, pm.options);
  EXPECT_EQ(out.principal_after, out.principal_before);
  EXPECT_FALSE(out.uses_costly);
}

TEST(Shift, CostlyPairMenu) {
  const ScreeningInstance inst = fixtures::costly_pair();
  const ShiftOutcome out = shift_mechanism(inst, costly_pair_path());
  EXPECT_EQ(out.shifted.options[0], (Option{1, 0, 0.0}));
  EXPECT_EQ(out.shifted.options[1], (Option{0, 0, -1.0}));
  EXPECT_EQ(out.max_payoff_change, 0.0);
  EXPECT_TRUE(out.downward_ic);
  EXPECT_TRUE(out.ir);
  EXPECT_EQ(out.upward_violations, 1u);
  EXPECT_NEAR(out.principal_before, 0.125, 1e-12);
  EXPECT_NEAR(out.principal_after, out.principal_before, 1e-12);
}

TEST(Shift, StrictlyCostlyImproves) {
  ScreeningInstance inst = fixtures::costly_pair();
  inst.costly.u_b = {{0.0, 0.0}, {-1.0, -0.5}};
  inst.costly.v_b = {{0.0, 0.0}, {0.0, 0.2}};
  PathMechanism pm = costly_pair_path();
  pm.options = {{0, 0, 0.0}, {1, 1, 0.0}};
  const Vec t = path_max_transfers(inst, pm);
  for (std::size_t l = 0; l < 2; ++l) pm.options[l].t = t[l];
  const ShiftOutcome out = shift_mechanism(inst, pm);
  EXPECT_TRUE(out.uses_costly);
  EXPECT_GT(out.principal_after, out.principal_before + 1e-9);
  EXPECT_TRUE(out.downward_ic);
  EXPECT_TRUE(out.ir);
}

TEST(Shift, RejectsNonIcInput) {
  const ScreeningInstance inst = fixtures::costly_pair();
  PathMechanism pm = costly_pair_path();
  pm.options[1].t = -3.0;
  EXPECT_THROW(shift_mechanism(inst, pm), InputNotIC);
}

MultiplicativeInstance half_shift_instance() {
  MultiplicativeInstance mi;
  mi.theta_a = {1.0};
  mi.theta_b = {{-0.5}};
  mi.x_grid = {0.0, 0.5, 1.0};
  mi.u = {0.0, 0.5, 1.0};
  mi.c = {{0.0}, {1.0}};
  mi.cost = {0.0, 0.0, 0.0};
  mi.dist = {{{0, 0}}, {1.0}};
  return mi;
}

TEST(Multiplicative, BaselineKeepsAllocation) {
  const MultiplicativeInstance mi = half_shift_instance();
  const MultiplicativeShift out = shift_multiplicative(mi, {{2}, {0}, {0.4}});
  EXPECT_EQ(out.after[0].x, 1.0);
  EXPECT_EQ(out.after[0].y, 0u);
}

TEST(Multiplicative, HalfShift) {
  const MultiplicativeInstance mi = half_shift_instance();
  const MultiplicativeShift out = shift_multiplicative(mi, {{2}, {1}, {0.2}});
  EXPECT_NEAR(out.after[0].x, 0.5, 1e-12);
  EXPECT_EQ(out.after[0].t, 0.2);
  EXPECT_NEAR(out.max_payoff_change, 0.0, 1e-12);
  EXPECT_TRUE(out.allocation_within);
}

TEST(Multiplicative, IrFailingOptionIsNotChosen) {
  MultiplicativeInstance mi = half_shift_instance();
  mi.theta_b = {{-3.0}};
  const MultiplicativeShift out = shift_multiplicative(mi, {{1}, {1}, {0.0}});
  EXPECT_EQ(out.before[0].x, 0.0);
  EXPECT_EQ(out.before[0].y, 0u);
  EXPECT_EQ(out.after[0].x, 0.0);
  EXPECT_EQ(out.value_after, 0.0);
}

TEST(Multiplicative, OptimalJointMechanismsImprove) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    CounterRng rng(seed, 3);
    MultiplicativeInstance mi;
    mi.theta_a = detail::increasing_grid(rng, rng.between(1, 3), rng.uniform(0.5, 1.0), 0.2, 1.0);
    mi.theta_b.clear();
    const std::size_t nb = rng.between(1, 3);
    for (std::size_t b = 0; b < nb; ++b) mi.theta_b.push_back({-rng.uniform(0.0, 0.6)});
    std::sort(mi.theta_b.begin(), mi.theta_b.end());
    mi.theta_b.erase(std::unique(mi.theta_b.begin(), mi.theta_b.end()), mi.theta_b.end());
    mi.x_grid = {0.0, 0.5, 1.0};
    mi.u = {0.0, 0.5, 1.0};
    mi.c = {{0.0}, {rng.uniform(0.1, 0.5)}};
    mi.cost = {0.0, rng.uniform(0.0, 0.3), 0.0};
    mi.cost[2] = mi.cost[1] + rng.uniform(0.0, 0.6);
    mi.dist = random_path_mixture(rng, mi.theta_a.size(), mi.theta_b, rng.between(1, 2));
    if (!ratio_monotone(mi)) continue;
    const ScreeningInstance inst = to_screening(mi);
    const JointSolution sol = solve_joint(inst);
    MultiplicativeShift out;
    try {
      out = shift_multiplicative(mi, sol.mechanism);
    } catch (const OutOfRange&) {
      continue;
    }
    ++checked;
    EXPECT_GE(out.value_after, out.value_before - 1e-9) << seed;
    EXPECT_GE(out.value_before, out.value_input - 1e-9) << seed;
    EXPECT_TRUE(out.allocation_within) << seed;
    EXPECT_TRUE(out.downward_ic) << seed;
    EXPECT_LE(out.max_payoff_change, 1e-12) << seed;
  }
  EXPECT_GT(checked, 40u);
}

TEST(Converse, CrossedPairDominates) {
  const ScreeningInstance inst = make_costly_production_instance({});
  const ConverseArtifacts art = converse_construct(inst.productive.theta_a, inst.costly.theta_b, inst.dist,
                                                   {0.0, 1.0}, {{0.0}, {1.0}}, 0, 0);
  EXPECT_TRUE(art.certified);
  EXPECT_NEAR(art.menu_value, 1.5 - art.eps_star, 1e-12);
  EXPECT_NEAR(art.productive_value, 1.0, 1e-12);
  EXPECT_GT(art.r_val, art.q_val);
  EXPECT_GE(art.menu_value, art.r_val - 1e-9);
  EXPECT_LT(art.eps_star, 0.5);
  ASSERT_EQ(art.menu.size(), 3u);
}

TEST(Converse, ComonotoneRejected) {
  const ScreeningInstance inst = fixtures::costly_pair();
  EXPECT_THROW(converse_construct(inst.productive.theta_a, inst.costly.theta_b, inst.dist, {0.0, 1.0},
                                  {{0.0}, {1.0}}, 0, 0),
               PreconditionFailed);
}

TEST(Converse, IndependentBinarizationsRejected) {
  const Vec theta_a{0.0, 1.0};
  const std::vector<Point> theta_b{{0.0}, {1.0}};
  const JointDistribution dist{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0.25, 0.25, 0.25, 0.25}};
  EXPECT_THROW(converse_construct(theta_a, theta_b, dist, {0.0, 1.0}, {{0.0}, {1.0}}, 0, 0), PreconditionFailed);
}

TEST(Converse, NoCleanMedianRejected) {
  const Vec theta_a{0.0, 1.0};
  const std::vector<Point> theta_b{{0.0}, {1.0}};
  const JointDistribution dist{{{0, 1}, {1, 0}}, {0.4, 0.6}};
  EXPECT_THROW(converse_construct(theta_a, theta_b, dist, {0.0, 1.0}, {{0.0}, {1.0}}, 0, 0), PreconditionFailed);
}

TEST(Converse, RandomNegativeTypes) {
  for (std::size_t k = 0; k < 40; ++k) {
    const TypeSpace ts = converse_suite_types(5, k);
    const std::size_t dim = ts.theta_b.front().size();
    const ConverseArtifacts art = converse_construct(ts.theta_a, ts.theta_b, ts.dist, {0.0, 0.5, 1.0},
                                                     {Point(dim, 0.0), Point(dim, 1.0)}, 0, 0);
    EXPECT_TRUE(art.certified) << k;
    EXPECT_GT(art.margin, kValueTol) << k;
  }
}

}  // namespace
}  // namespace screenkit
