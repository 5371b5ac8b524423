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

DiscreteDistribution law(std::vector<Point> pts, Vec prob) { return {std::move(pts), std::move(prob)}; }

TEST(Dominance, PointMasses) {
  EXPECT_TRUE(check_dominance(law({{0.0}}, {1.0}), law({{1.0}}, {1.0})));
  EXPECT_FALSE(check_dominance(law({{1.0}}, {1.0}), law({{0.0}}, {1.0})));
}

TEST(Dominance, UniformBelowPointMass) {
  const auto p = law({{0.0}, {1.0}}, {0.5, 0.5});
  const auto q = law({{1.0}}, {1.0});
  EXPECT_TRUE(check_dominance(p, q));
  EXPECT_FALSE(check_dominance(q, p));
}

TEST(Dominance, IncomparableDiagonals) {
  const auto p = law({{0.0, 0.0}, {1.0, 1.0}}, {0.5, 0.5});
  const auto q = law({{0.0, 1.0}, {1.0, 0.0}}, {0.5, 0.5});
  EXPECT_FALSE(check_dominance(p, q));
  EXPECT_FALSE(check_dominance(q, p));
  EXPECT_FALSE(oracle::upper_set_dominance(p, q));
  EXPECT_FALSE(oracle::upper_set_dominance(q, p));
}

TEST(Dominance, DimensionMismatchThrows) {
  EXPECT_THROW(check_dominance(law({{0.0}}, {1.0}), law({{0.0, 1.0}}, {1.0})), StructuralError);
}

TEST(Dominance, FlowAgreesWithUpperSetsOnRandomPairs) {
  CounterRng rng(2024);
  std::size_t dominated = 0;
  for (int draw = 0; draw < 2000; ++draw) {
    auto random_law = [&](std::size_t n) {
      DiscreteDistribution d;
      double total = 0.0;
      while (d.points.size() < n) {
        Point pt{static_cast<double>(rng.index(3)), static_cast<double>(rng.index(3))};
        if (std::find(d.points.begin(), d.points.end(), pt) != d.points.end()) continue;
        d.points.push_back(pt);
        d.prob.push_back(rng.uniform(0.1, 1.0));
        total += d.prob.back();
      }
      for (double& w : d.prob) w /= total;
      return d;
    };
    const auto p = random_law(rng.between(1, 4));
    const auto q = random_law(rng.between(1, 4));
    const bool flow = check_dominance(p, q);
    EXPECT_EQ(flow, oracle::upper_set_dominance(p, q, 1e-11));
    if (flow) {
      ++dominated;
      const Coupling c = strassen_coupling(p, q);
      EXPECT_LE(oracle::marginal_error(c, p, q), 1e-9);
      EXPECT_TRUE(oracle::coupling_monotone(c, p, q));
    } else {
      EXPECT_THROW(strassen_coupling(p, q), NotDominated);
    }
  }
  EXPECT_GT(dominated, 50u);
}

TEST(Coupling, PointMasses) {
  const Coupling c = strassen_coupling(law({{0.0}}, {1.0}), law({{1.0}}, {1.0}));
  ASSERT_EQ(c.mass.size(), 1u);
  EXPECT_NEAR(c.mass[0][0], 1.0, 1e-12);
}

TEST(Coupling, MarginalsForceTheSplit) {
  const Coupling c = strassen_coupling(law({{0.0}, {1.0}}, {0.5, 0.5}), law({{1.0}}, {1.0}));
  EXPECT_NEAR(c.mass[0][0], 0.5, 1e-12);
  EXPECT_NEAR(c.mass[1][0], 0.5, 1e-12);
}

TEST(Monotonicity, ComonotonePair) {
  const ScreeningInstance inst = fixtures::costly_pair();
  EXPECT_TRUE(check_stochastic_monotonicity(inst.dist, inst.costly.theta_b).ok);
}

TEST(Monotonicity, CrossedPairHasWitness) {
  const ScreeningInstance inst = make_costly_production_instance({});
  const auto check = check_stochastic_monotonicity(inst.dist, inst.costly.theta_b);
  EXPECT_FALSE(check.ok);
  EXPECT_EQ(inst.productive.theta_a[check.lower_a], 1.0);
  EXPECT_EQ(inst.productive.theta_a[check.upper_a], 2.0);
}

TEST(Monotonicity, ProductLaw) {
  const std::vector<Point> pts{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  JointDistribution dist;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      dist.support.push_back({a, b});
      dist.prob.push_back((a + 1.0) / 6.0 * (b == 0 ? 0.5 : 0.25));
    }
  EXPECT_TRUE(check_stochastic_monotonicity(dist, pts).ok);
}

TEST(Paths, ComonotoneSupportIsOnePath) {
  const std::vector<Point> pts{{0.0}, {1.0}, {2.0}};
  const JointDistribution dist{{{0, 0}, {1, 1}, {2, 2}}, {0.2, 0.3, 0.5}};
  const PathMixture mix = path_decomposition(dist, pts);
  ASSERT_EQ(mix.path.size(), 1u);
  EXPECT_NEAR(mix.weight[0], 1.0, 1e-12);
  EXPECT_EQ(mix.path[0], (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_LE(mixture_error(mix, dist), 1e-12);
}

TEST(Paths, IndependentSquare) {
  const std::vector<Point> pts{{0.0}, {1.0}};
  const JointDistribution dist{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0.25, 0.25, 0.25, 0.25}};
  const PathMixture mix = path_decomposition(dist, pts);
  ASSERT_EQ(mix.path.size(), 2u);
  EXPECT_EQ(mix.path[0], (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(mix.path[1], (std::vector<std::size_t>{1, 1}));
  EXPECT_NEAR(mix.weight[0], 0.5, 1e-12);
  EXPECT_LE(mixture_error(mix, dist), 1e-12);
}

TEST(Paths, CostlyPairSinglePath) {
  const ScreeningInstance inst = fixtures::costly_pair();
  const PathMixture mix = path_decomposition(inst.dist, inst.costly.theta_b);
  ASSERT_EQ(mix.path.size(), 1u);
  EXPECT_EQ(inst.costly.theta_b[mix.path[0][0]][0], -1.0);
  EXPECT_EQ(inst.costly.theta_b[mix.path[0][1]][0], 0.0);
}

TEST(Paths, RejectsCrossedLaw) {
  const ScreeningInstance inst = make_costly_production_instance({});
  EXPECT_THROW(path_decomposition(inst.dist, inst.costly.theta_b), NotMonotone);
}

TEST(Paths, RandomMixturesRoundTrip) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CounterRng rng(seed, 9);
    const std::size_t dim = 1 + seed % 3;
    const auto pts = detail::distinct_points(rng, rng.between(2, 6), dim);
    const JointDistribution dist = random_path_mixture(rng, rng.between(1, 5), pts, rng.between(1, 4));
    ASSERT_TRUE(check_stochastic_monotonicity(dist, pts).ok);
    const PathMixture mix = path_decomposition(dist, pts);
    EXPECT_LE(mixture_error(mix, dist), 1e-9) << seed;
    for (std::size_t k = 0; k < mix.path.size(); ++k) EXPECT_TRUE(path_is_monotone(mix, k, pts));
    double total = 0.0;
    for (double w : mix.weight) total += w;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Generator, InstancesPassValidation) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ScreeningInstance inst = suite_instance(seed, seed);
    const ValidationReport rep = validate_instance(inst);
    EXPECT_TRUE(rep.theorem_hypotheses_hold()) << seed;
    EXPECT_EQ(rep.strictly_costly(), seed % 2 == 0) << seed;
  }
}

TEST(Generator, Deterministic) {
  PositiveKnobs knobs;
  EXPECT_EQ(random_positive_instance(42, knobs), random_positive_instance(42, knobs));
  EXPECT_FALSE(random_positive_instance(42, knobs) == random_positive_instance(43, knobs));
}

TEST(Generator, SingleCostTypeHasFewPaths) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    PositiveKnobs knobs;
    knobs.n_b = 1;
    const ScreeningInstance inst = random_positive_instance(seed, knobs);
    const PathMixture mix = path_decomposition(inst.dist, inst.costly.theta_b);
    EXPECT_EQ(mix.path.size(), 1u);
  }
}

TEST(Parallel, ResultsInIndexOrder) {
  const std::function<std::size_t(std::size_t)> square = [](std::size_t i) { return i * i; };
  const auto out = parallel_map(100, square, 4);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], i * i);
}

TEST(Parallel, LowestFailureIsRethrown) {
  const std::function<int(std::size_t)> fn = [](std::size_t i) -> int {
    if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
    return 0;
  };
  try {
    parallel_map(50, fn, 4);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

}  // namespace
}  // namespace screenkit
