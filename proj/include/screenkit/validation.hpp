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
#include <string>
#include <vector>

#include "screenkit/common.hpp"
#include "screenkit/model.hpp"
#include "screenkit/stochastics.hpp"

namespace screenkit {

struct AssumptionStatus {
  std::string id;
  bool pass = true;
  bool flag_only = false;  // reported, never treated as a hard failure
  std::vector<std::size_t> witness;
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionStatus> entries;

  const AssumptionStatus& at(const std::string& id) const {
    for (const auto& e : entries)
      if (e.id == id) return e;
    throw std::out_of_range("no assumption entry " + id);
  }
  bool passes(const std::string& id) const { return at(id).pass; }
  bool strictly_costly() const { return passes("strict"); }

  // Everything except the flags.
  bool required_pass() const {
    for (const auto& e : entries)
      if (!e.flag_only && !e.pass) return false;
    return true;
  }
  // Required checks plus the surplus sorting condition.
  bool theorem_hypotheses_hold() const { return required_pass() && passes("1.3"); }
};

namespace detail {
inline constexpr double kOrderTol = 1e-12;
}

// Witness layouts:
//   1.1  (x, theta, theta')          u_a[x][theta] > u_a[x][theta']
//   1.2  (x, x', theta, theta')      difference not strictly larger at theta'
//   1.3  (x, x', theta, theta')      surplus gain positive at theta, not at theta'
//   2.1  (y, b, b')                  b <= b' but u_b[y][b] > u_b[y][b']
//   2.2  (a, a')                     conditional at a not dominated by the one at a'
//   eq1  (y, b)                      u_b + v_b > 0
//   y0   (b)                         u_b or v_b nonzero at y0
//   strict (y, b)                    u_b + v_b = 0 for y != y0
inline ValidationReport validate_instance(const ScreeningInstance& inst) {
  check_structure(inst);
  const auto& p = inst.productive;
  const auto& c = inst.costly;
  const std::size_t nx = p.x_grid.size(), na = p.theta_a.size();
  const std::size_t ny = c.y_set.size(), nb = c.theta_b.size();
  using detail::kOrderTol;
  ValidationReport rep;
  auto add = [&](std::string id, bool flag) -> AssumptionStatus& {
    rep.entries.push_back({std::move(id), true, flag, {}, {}});
    return rep.entries.back();
  };
  auto fail = [](AssumptionStatus& e, std::vector<std::size_t> w, std::string why) {
    if (!e.pass) return;
    e.pass = false;
    e.witness = std::move(w);
    e.detail = std::move(why);
  };

  auto& a11 = add("1.1", false);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t k = 0; k + 1 < na; ++k)
      if (p.u_a[x][k + 1] < p.u_a[x][k] - kOrderTol) fail(a11, {x, k, k + 1}, "u_a decreases in theta_a");

  auto& a12 = add("1.2", false);
  auto& a13 = add("1.3", true);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t xh = x + 1; xh < nx; ++xh)
      for (std::size_t k = 0; k < na; ++k)
        for (std::size_t kh = k + 1; kh < na; ++kh) {
          const double lo = p.u_a[xh][k] - p.u_a[x][k];
          const double hi = p.u_a[xh][kh] - p.u_a[x][kh];
          if (!(lo < hi - kOrderTol)) fail(a12, {x, xh, k, kh}, "increasing differences not strict");
          const double s_lo = lo + p.v_a[xh][k] - p.v_a[x][k];
          const double s_hi = hi + p.v_a[xh][kh] - p.v_a[x][kh];
          if (s_lo > kOrderTol && !(s_hi > kOrderTol)) fail(a13, {x, xh, k, kh}, "surplus gain changes sign downward");
        }

  auto& a21 = add("2.1", false);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t bh = 0; bh < nb; ++bh)
        if (b != bh && weakly_below(c.theta_b[b], c.theta_b[bh]) && c.u_b[y][b] > c.u_b[y][bh] + kOrderTol)
          fail(a21, {y, b, bh}, "u_b decreases along the componentwise order");

  auto& a22 = add("2.2", false);
  auto mono = check_stochastic_monotonicity(inst.dist, c.theta_b);
  if (!mono.ok) fail(a22, {mono.lower_a, mono.upper_a}, "conditional laws not stochastically ordered");

  auto& eq1 = add("eq1", false);
  auto& y0 = add("y0", false);
  auto& strict = add("strict", true);
  for (std::size_t b = 0; b < nb; ++b) {
    if (c.u_b[c.y0_index][b] != 0.0 || c.v_b[c.y0_index][b] != 0.0) fail(y0, {b}, "y0 utilities must be exactly zero");
    for (std::size_t y = 0; y < ny; ++y) {
      const double s = c.u_b[y][b] + c.v_b[y][b];
      if (s > kOrderTol) fail(eq1, {y, b}, "costly surplus is positive");
      if (y != c.y0_index && !(s < -kOrderTol)) fail(strict, {y, b}, "costly surplus not strictly negative");
    }
  }
  return rep;
}

}  // namespace screenkit
