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

#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "screenkit/common.hpp"

namespace screenkit {

// One-dimensional productive side: types, allocation grid, and the two
// utility tables indexed [allocation][type].
struct ProductiveSpec {
  Vec theta_a;
  Vec x_grid;
  Table u_a;
  Table v_a;

  bool operator==(const ProductiveSpec&) const = default;
};

// Costly side. y_set[y0_index] is the no-screening allocation.
struct CostlySpec {
  std::vector<Point> theta_b;
  std::vector<Point> y_set;
  std::size_t y0_index = 0;
  Table u_b;
  Table v_b;

  std::size_t dimension() const { return theta_b.empty() ? 0 : theta_b.front().size(); }
  bool operator==(const CostlySpec&) const = default;
};

struct TypeIndex {
  std::size_t a = 0;  // into theta_a
  std::size_t b = 0;  // into theta_b

  bool operator==(const TypeIndex&) const = default;
  auto operator<=>(const TypeIndex&) const = default;
};

struct JointDistribution {
  std::vector<TypeIndex> support;
  Vec prob;

  std::size_t size() const { return support.size(); }
  bool operator==(const JointDistribution&) const = default;
};

struct ScreeningInstance {
  ProductiveSpec productive;
  CostlySpec costly;
  JointDistribution dist;

  std::size_t num_x() const { return productive.x_grid.size(); }
  std::size_t num_y() const { return costly.y_set.size(); }
  bool operator==(const ScreeningInstance&) const = default;
};

struct Option {
  std::size_t x = 0;
  std::size_t y = 0;
  double t = 0.0;

  bool operator==(const Option&) const = default;
};

using Menu = std::vector<Option>;

// Direct mechanism: one option per support point, in support order.
struct Mechanism {
  std::vector<std::size_t> x;
  std::vector<std::size_t> y;
  Vec t;

  std::size_t size() const { return x.size(); }
  Option option(std::size_t i) const { return {x[i], y[i], t[i]}; }
};

// Marker for the reserved outside option in a best-response assignment.
inline constexpr std::size_t kOutside = std::numeric_limits<std::size_t>::max();

inline void check_structure(const ScreeningInstance& inst) {
  const auto& p = inst.productive;
  const auto& c = inst.costly;
  auto fail = [](const std::string& what) { throw StructuralError(what); };
  if (p.theta_a.empty() || p.x_grid.empty()) fail("empty productive type or allocation grid");
  if (!strictly_increasing(p.theta_a)) fail("theta_a must be strictly increasing");
  if (!strictly_increasing(p.x_grid)) fail("x_grid must be strictly increasing");
  for (const Table* tab : {&p.u_a, &p.v_a}) {
    if (tab->size() != p.x_grid.size()) fail("productive table row count must equal |x_grid|");
    for (const auto& row : *tab)
      if (row.size() != p.theta_a.size()) fail("productive table column count must equal |theta_a|");
    if (!all_finite(*tab)) fail("productive table has non-finite entry");
  }
  if (c.theta_b.empty() || c.y_set.empty()) fail("empty costly type or allocation set");
  for (const auto& pt : c.theta_b)
    if (pt.size() != c.dimension() || pt.empty()) fail("theta_b points must share a positive dimension");
  if (c.y0_index >= c.y_set.size()) fail("y0_index out of range");
  for (const Table* tab : {&c.u_b, &c.v_b}) {
    if (tab->size() != c.y_set.size()) fail("costly table row count must equal |y_set|");
    for (const auto& row : *tab)
      if (row.size() != c.theta_b.size()) fail("costly table column count must equal |theta_b|");
    if (!all_finite(*tab)) fail("costly table has non-finite entry");
  }
  const auto& d = inst.dist;
  if (d.support.empty()) fail("empty support");
  if (d.prob.size() != d.support.size()) fail("prob and support lengths differ");
  double total = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.support[i].a >= p.theta_a.size() || d.support[i].b >= c.theta_b.size())
      fail("support index out of range");
    if (!(d.prob[i] >= 0.0) || !std::isfinite(d.prob[i])) fail("negative or non-finite probability");
    total += d.prob[i];
    for (std::size_t j = 0; j < i; ++j)
      if (d.support[j] == d.support[i]) fail("duplicate support pair");
  }
  if (std::abs(total - 1.0) > 1e-12) fail("probabilities must sum to 1");
}

inline double agent_payoff(const ScreeningInstance& inst, TypeIndex type, const Option& o) {
  return inst.productive.u_a[o.x][type.a] + inst.costly.u_b[o.y][type.b] - o.t;
}

inline double principal_payoff(const ScreeningInstance& inst, TypeIndex type, const Option& o) {
  return inst.productive.v_a[o.x][type.a] + inst.costly.v_b[o.y][type.b] + o.t;
}

inline double expected_principal_payoff(const ScreeningInstance& inst, const Mechanism& m) {
  double total = 0.0;
  for (std::size_t i = 0; i < inst.dist.size(); ++i)
    total += inst.dist.prob[i] * principal_payoff(inst, inst.dist.support[i], m.option(i));
  return total;
}

struct BestResponse {
  std::vector<std::size_t> choice;  // menu index or kOutside, per support point
  double value = 0.0;
};

// Agent maximizes; agent ties within kFeasTol go to the principal, then to
// the lowest menu index. The outside option sits after every menu entry.
inline BestResponse menu_best_response(const ScreeningInstance& inst, const Menu& menu) {
  BestResponse out;
  out.choice.resize(inst.dist.size(), kOutside);
  for (std::size_t i = 0; i < inst.dist.size(); ++i) {
    const TypeIndex type = inst.dist.support[i];
    double best_agent = 0.0, best_principal = 0.0;
    std::size_t best = kOutside;
    auto consider = [&](std::size_t k, double ua, double vp) {
      if (ua > best_agent + kFeasTol ||
          (ua >= best_agent - kFeasTol && vp > best_principal + kFeasTol)) {
        best = k;
        best_agent = ua;
        best_principal = vp;
      }
    };
    bool first = true;
    for (std::size_t k = 0; k < menu.size(); ++k) {
      double ua = agent_payoff(inst, type, menu[k]);
      double vp = principal_payoff(inst, type, menu[k]);
      if (first) {
        best = k, best_agent = ua, best_principal = vp, first = false;
      } else {
        consider(k, ua, vp);
      }
    }
    if (first) {
      best = kOutside;
    } else {
      consider(kOutside, 0.0, 0.0);
    }
    out.choice[i] = best;
    out.value += inst.dist.prob[i] * (best == kOutside ? 0.0 : best_principal);
  }
  return out;
}

enum class IcDirection { all, downward, upward };

struct Violation {
  std::size_t from = 0;  // deviating support point
  std::size_t to = 0;    // imitated support point
  double gain = 0.0;
};

// Strict componentwise order on two-component types: a <= a', b <= b', not equal.
inline bool type_below(const ScreeningInstance& inst, TypeIndex lo, TypeIndex hi) {
  if (lo == hi) return false;
  return inst.productive.theta_a[lo.a] <= inst.productive.theta_a[hi.a] &&
         weakly_below(inst.costly.theta_b[lo.b], inst.costly.theta_b[hi.b]);
}

inline std::vector<Violation> check_ic(const ScreeningInstance& inst, const Mechanism& m,
                                       IcDirection dir) {
  std::vector<Violation> out;
  const auto& sup = inst.dist.support;
  for (std::size_t i = 0; i < sup.size(); ++i) {
    const double truthful = agent_payoff(inst, sup[i], m.option(i));
    for (std::size_t j = 0; j < sup.size(); ++j) {
      if (i == j) continue;
      if (dir == IcDirection::downward && !type_below(inst, sup[j], sup[i])) continue;
      if (dir == IcDirection::upward && !type_below(inst, sup[i], sup[j])) continue;
      const double gain = agent_payoff(inst, sup[i], m.option(j)) - truthful;
      if (gain > kFeasTol) out.push_back({i, j, gain});
    }
  }
  return out;
}

inline std::vector<Violation> check_ir(const ScreeningInstance& inst, const Mechanism& m) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < inst.dist.size(); ++i) {
    const double truthful = agent_payoff(inst, inst.dist.support[i], m.option(i));
    if (truthful < -kFeasTol) out.push_back({i, i, -truthful});
  }
  return out;
}

// Options of a mechanism in support order, as a menu.
inline Menu menu_of(const Mechanism& m) {
  Menu menu;
  for (std::size_t i = 0; i < m.size(); ++i) menu.push_back(m.option(i));
  return menu;
}

}  // namespace screenkit
