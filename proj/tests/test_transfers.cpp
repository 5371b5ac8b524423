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
#include "properties.hpp"
#include "screenkit.hpp"

namespace screenkit {
namespace {

TEST(Regions, SingleDescent) {
  const URegions ur = u_region_decomposition({1, 0});
  ASSERT_EQ(ur.regions.size(), 1u);
  EXPECT_EQ(ur.regions[0], (std::pair<std::size_t, std::size_t>{0, 2}));
  EXPECT_TRUE(ur.monotone.empty());
}

TEST(Regions, MonotoneHasNoRegions) {
  const URegions ur = u_region_decomposition({0, 0, 1, 2});
  EXPECT_TRUE(ur.regions.empty());
  EXPECT_EQ(ur.monotone, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Regions, ReturnToOriginLevelDoesNotClose) {
  const URegions ur = u_region_decomposition({1, 0, 1});
  ASSERT_EQ(ur.regions.size(), 1u);
  EXPECT_EQ(ur.regions[0], (std::pair<std::size_t, std::size_t>{0, 3}));
}

TEST(Regions, ClosedRegionKeepsDestination) {
  const URegions ur = u_region_decomposition({1, 0, 2, 3});
  ASSERT_EQ(ur.regions.size(), 1u);
  EXPECT_EQ(ur.regions[0], (std::pair<std::size_t, std::size_t>{0, 2}));
  EXPECT_EQ(ur.monotone, (std::vector<std::size_t>{2, 3}));
}

TEST(Regions, BackToBackRegions) {
  const URegions ur = u_region_decomposition({1, 0, 2, 1, 3});
  ASSERT_EQ(ur.regions.size(), 2u);
  EXPECT_EQ(ur.regions[1], (std::pair<std::size_t, std::size_t>{2, 4}));
  EXPECT_EQ(ur.monotone, (std::vector<std::size_t>{4}));
}

TEST(ClosedForm, BinaryLine) {
  const Vec t = closed_form_downward_transfers(fixtures::binary_line(2.5), {1, 0});
  EXPECT_EQ(t, (Vec{0.0, -1.0}));
}

TEST(ClosedForm, ConstantAllocationIsPostedPrice) {
  const OneDimInstance inst = fixtures::three_type_line();
  const Vec t = closed_form_downward_transfers(inst, {1, 1, 1});
  for (double v : t) EXPECT_NEAR(v, inst.u[1][0], 1e-12);
}

TEST(ClosedForm, ThreeTypeRegion) {
  const OneDimInstance inst = fixtures::three_type_line();
  const Vec t = closed_form_downward_transfers(inst, {1, 0, 1});
  EXPECT_NEAR(t[0], 0.0, 1e-12);
  EXPECT_NEAR(t[1], -0.5, 1e-12);
  EXPECT_NEAR(t[2], 0.0, 1e-12);
  const Vec g = graph_optimal_transfers(inst, {1, 0, 1}, ConstraintSet::downward);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(t[i], g[i], 1e-12);
}

TEST(Graph, DownwardMatchesClosedForm) {
  const Vec t = graph_optimal_transfers(fixtures::binary_line(2.5), {1, 0}, ConstraintSet::downward);
  EXPECT_EQ(t, (Vec{0.0, -1.0}));
}

TEST(Graph, FullSetPostedPrice) {
  const Vec t = graph_optimal_transfers(fixtures::binary_line(1.0), {0, 1}, ConstraintSet::all);
  EXPECT_EQ(t, (Vec{0.0, 1.0}));
}

TEST(Graph, DecreasingAllocationNotImplementable) {
  EXPECT_THROW(graph_optimal_transfers(fixtures::binary_line(2.5), {1, 0}, ConstraintSet::all), NotImplementable);
}

TEST(Binding, BinaryLine) {
  const OneDimInstance inst = fixtures::binary_line(2.5);
  const BindingReport rep = binding_report(inst, {1, 0}, {0.0, -1.0});
  EXPECT_TRUE(rep.pass);
  ASSERT_EQ(rep.items.size(), 2u);
  EXPECT_EQ(rep.items[0].label, "IR[1]");
  EXPECT_EQ(rep.items[1].label, "IC[2->1]");
}

TEST(Binding, MonotoneClosedFormBindsLocally) {
  const OneDimInstance inst = fixtures::three_type_line();
  const Allocation x{0, 1, 1};
  const BindingReport rep = binding_report(inst, x, closed_form_downward_transfers(inst, x));
  EXPECT_TRUE(rep.pass);
  std::vector<std::string> labels;
  for (const auto& item : rep.items) labels.push_back(item.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"IR[1]", "IC[2->1]", "IC[3->2]"}));
}

TEST(Binding, ThreeTypeRegion) {
  const OneDimInstance inst = fixtures::three_type_line();
  const BindingReport rep = binding_report(inst, {1, 0, 1}, {0.0, -0.5, 0.0});
  EXPECT_TRUE(rep.pass);
  std::vector<std::string> labels;
  for (const auto& item : rep.items) labels.push_back(item.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"IR[1]", "IC[2->1]", "IC[3->1]"}));
}

TEST(Binding, SlackTransfersFail) {
  const OneDimInstance inst = fixtures::binary_line(2.5);
  EXPECT_FALSE(binding_report(inst, {1, 0}, {-0.5, -1.5}).pass);
}

TEST(Oracle, ClosedFormEqualsShortestPaths) {
  CounterRng rng(31337);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = rng.between(1, 6);
    const OneDimInstance inst = random_line_instance(rng, n, rng.between(2, 4), rng.coin());
    const Allocation x = random_allocation(rng, n, inst.num_x(), false);
    const Vec closed = closed_form_downward_transfers(inst, x);
    const Vec graph = graph_optimal_transfers(inst, x, ConstraintSet::downward);
    const auto fw = oracle::line_transfers(inst, x, true);
    ASSERT_TRUE(fw.has_value());
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(closed[i], graph[i], 1e-9);
      EXPECT_NEAR(closed[i], (*fw)[i], 1e-9);
    }
    EXPECT_TRUE(binding_report(inst, x, closed).pass);
    EXPECT_TRUE(check_ic(inst, x, closed, LineDirection::downward).empty());
    EXPECT_TRUE(check_ir(inst, x, closed).empty());
  }
}

TEST(Oracle, FullSetFeasibleExactlyForMonotone) {
  CounterRng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.between(2, 5);
    const OneDimInstance inst = random_line_instance(rng, n, 3, false);
    const Allocation x = random_allocation(rng, n, 3, rng.coin());
    const auto fw = oracle::line_transfers(inst, x, false);
    EXPECT_EQ(fw.has_value(), is_monotone(x));
    if (fw) {
      const Vec g = graph_optimal_transfers(inst, x, ConstraintSet::all);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(g[i], (*fw)[i], 1e-9);
    } else {
      EXPECT_THROW(graph_optimal_transfers(inst, x, ConstraintSet::all), NotImplementable);
    }
  }
}

TEST(RevealedPreference, HoldsOnRandomMechanisms) {
  CounterRng rng(4242);
  properties::TripleTally tally;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = rng.between(3, 5);
    const OneDimInstance inst = random_line_instance(rng, n, rng.between(2, 4), false);
    const Allocation x = random_allocation(rng, n, inst.num_x(), trial % 3 == 0);
    Vec t = closed_form_downward_transfers(inst, x);
    if (trial % 2 == 1)
      for (double& v : t) v -= rng.uniform(0.0, 0.3);
    properties::tally_triples(inst, x, t, tally);
  }
  EXPECT_TRUE(tally.clean());
  EXPECT_GT(tally.local_to_global_checked, 100u);
  EXPECT_GT(tally.global_to_local_checked, 20u);
  EXPECT_GT(tally.upward_checked, 20u);
}

}  // namespace
}  // namespace screenkit
