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


#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "screenkit/common.hpp"
#include "screenkit/model.hpp"

namespace screenkit {

// Regulated monopoly with linear inverse demand p(x) = 1 - x, cost
// (beta - theta) x + delta x^2 / 2, and certificate effort C max(y - theta_b, 0).
struct RegulationParams {
  Vec theta_a{0.1, 0.3, 0.5};
  Vec theta_b{0.0, 1.0, 2.0};  // baseline certificate levels, >= 0
  Vec x_grid{0.0, 0.2, 0.4, 0.6, 0.8};
  double beta = 0.6;
  double delta = 0.5;
  double lambda = 0.5;
  double effort_cost = 0.3;
  std::size_t max_level = 2;   // certificates 0..max_level
  JointDistribution dist{{{0, 0}, {1, 1}, {2, 2}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
};

// Labor screening: worker payoff w - x^2 / (1 + theta) - sum_i y_i kappa_i / theta_i,
// firm payoff (1 + rho theta) x - w, each activity binary.
struct LaborParams {
  Vec theta_a{1.0, 2.0, 3.0};
  std::vector<Point> theta_b{{1.0, 1.0}, {2.0, 1.5}, {3.0, 2.0}};  // positive cost types
  Vec x_grid{0.0, 0.5, 1.0, 1.5};
  double rho = 0.5;
  Vec kappa{0.2, 0.3};
  JointDistribution dist{{{0, 0}, {1, 1}, {2, 2}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
};

// Two goods priced by a monopolist; the second costs more than some buyers value it.
struct CostlyProductionParams {
  Vec theta_a{1.0, 2.0};
  Vec theta_b{1.0, 2.0};
  double cost_a = 0.0;
  double cost_b = 2.0;
  JointDistribution dist{{{0, 1}, {1, 0}}, {0.5, 0.5}};
};

namespace detail {
inline void require(bool ok, const char* what) {
  if (!ok) throw OutOfRange(what);
}
}  // namespace detail

inline ScreeningInstance make_regulation_instance(const RegulationParams& rp) {
  detail::require(rp.lambda > 0.0, "lambda must be positive");
  detail::require(rp.delta >= 0.0, "delta must be nonnegative");
  detail::require(rp.effort_cost > 0.0, "effort cost must be positive");
  detail::require(rp.max_level >= 1, "need at least one certificate level above zero");
  for (double b : rp.theta_b) detail::require(b >= 0.0, "baseline levels must be nonnegative");
  for (double x : rp.x_grid) detail::require(x >= 0.0 && x <= 1.0, "quantities must lie in [0, 1]");
  ScreeningInstance inst;
  auto& p = inst.productive;
  p.theta_a = rp.theta_a;
  p.x_grid = rp.x_grid;
  p.u_a.assign(p.x_grid.size(), Vec(p.theta_a.size()));
  p.v_a.assign(p.x_grid.size(), Vec(p.theta_a.size()));
  for (std::size_t k = 0; k < p.x_grid.size(); ++k)
    for (std::size_t a = 0; a < p.theta_a.size(); ++a) {
      const double x = p.x_grid[k];
      const double revenue = (1.0 - x) * x;
      const double psi = (rp.beta - p.theta_a[a]) * x + 0.5 * rp.delta * x * x;
      const double surplus = 0.5 * x * x;
      p.u_a[k][a] = revenue - psi;
      p.v_a[k][a] = (surplus + revenue - psi) / rp.lambda;
    }
  auto& c = inst.costly;
  for (double b : rp.theta_b) c.theta_b.push_back({b});
  c.y0_index = 0;
  for (std::size_t y = 0; y <= rp.max_level; ++y) c.y_set.push_back({static_cast<double>(y)});
  c.u_b.assign(c.y_set.size(), Vec(c.theta_b.size(), 0.0));
  c.v_b.assign(c.y_set.size(), Vec(c.theta_b.size(), 0.0));
  for (std::size_t y = 0; y < c.y_set.size(); ++y)
    for (std::size_t b = 0; b < c.theta_b.size(); ++b)
      c.u_b[y][b] = -rp.effort_cost * std::max(c.y_set[y][0] - c.theta_b[b][0], 0.0);
  inst.dist = rp.dist;
  return inst;
}

inline ScreeningInstance make_labor_instance(const LaborParams& lp) {
  const std::size_t activities = lp.kappa.size();
  detail::require(activities >= 1 && activities <= 6, "between one and six activities");
  for (double k : lp.kappa) detail::require(k > 0.0, "activity costs must be positive");
  for (double a : lp.theta_a) detail::require(a > -1.0, "ability must exceed -1");
  for (const auto& pt : lp.theta_b) {
    detail::require(pt.size() == activities, "cost type dimension must match activities");
    for (double v : pt) detail::require(v > 0.0, "cost types must be positive");
  }
  for (double x : lp.x_grid) detail::require(x >= 0.0, "work amounts must be nonnegative");
  ScreeningInstance inst;
  auto& p = inst.productive;
  p.theta_a = lp.theta_a;
  p.x_grid = lp.x_grid;
  p.u_a.assign(p.x_grid.size(), Vec(p.theta_a.size()));
  p.v_a.assign(p.x_grid.size(), Vec(p.theta_a.size()));
  for (std::size_t k = 0; k < p.x_grid.size(); ++k)
    for (std::size_t a = 0; a < p.theta_a.size(); ++a) {
      const double x = p.x_grid[k];
      p.u_a[k][a] = -x * x / (1.0 + p.theta_a[a]);
      p.v_a[k][a] = (1.0 + lp.rho * p.theta_a[a]) * x;
    }
  auto& c = inst.costly;
  c.theta_b = lp.theta_b;
  c.y0_index = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << activities); ++mask) {
    Point y(activities);
    for (std::size_t i = 0; i < activities; ++i) y[i] = static_cast<double>((mask >> i) & 1);
    c.y_set.push_back(y);
  }
  c.u_b.assign(c.y_set.size(), Vec(c.theta_b.size(), 0.0));
  c.v_b.assign(c.y_set.size(), Vec(c.theta_b.size(), 0.0));
  for (std::size_t y = 0; y < c.y_set.size(); ++y)
    for (std::size_t b = 0; b < c.theta_b.size(); ++b) {
      double cost = 0.0;
      for (std::size_t i = 0; i < activities; ++i) cost += c.y_set[y][i] * lp.kappa[i] / c.theta_b[b][i];
      c.u_b[y][b] = -cost;
    }
  inst.dist = lp.dist;
  return inst;
}

inline ScreeningInstance make_costly_production_instance(const CostlyProductionParams& cp) {
  for (double b : cp.theta_b) detail::require(b <= cp.cost_b, "second good must cost at least its value");
  detail::require(cp.cost_a >= 0.0, "production cost must be nonnegative");
  ScreeningInstance inst;
  auto& p = inst.productive;
  p.theta_a = cp.theta_a;
  p.x_grid = {0.0, 1.0};
  p.u_a.assign(2, Vec(p.theta_a.size()));
  p.v_a.assign(2, Vec(p.theta_a.size()));
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t a = 0; a < p.theta_a.size(); ++a) {
      p.u_a[x][a] = p.theta_a[a] * p.x_grid[x];
      p.v_a[x][a] = -cp.cost_a * p.x_grid[x];
    }
  auto& c = inst.costly;
  for (double b : cp.theta_b) c.theta_b.push_back({b});
  c.y_set = {{0.0}, {1.0}};
  c.y0_index = 0;
  c.u_b.assign(2, Vec(c.theta_b.size(), 0.0));
  c.v_b.assign(2, Vec(c.theta_b.size(), 0.0));
  for (std::size_t b = 0; b < c.theta_b.size(); ++b) {
    c.u_b[1][b] = c.theta_b[b][0];
    c.v_b[1][b] = -cp.cost_b;
  }
  inst.dist = cp.dist;
  return inst;
}

// Bundle at price 3 and the first good alone at price 2.
inline Menu costly_production_menu() { return {{1, 1, 3.0}, {1, 0, 2.0}}; }

}  // namespace screenkit
