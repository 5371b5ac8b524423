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
#include <cstdint>
#include <map>
#include <vector>

#include "screenkit/common.hpp"
#include "screenkit/model.hpp"
#include "screenkit/rng.hpp"
#include "screenkit/transfers.hpp"

namespace screenkit {

struct PositiveKnobs {
  std::size_t n_a = 3;   // theta_a levels
  std::size_t n_b = 2;   // theta_b points
  std::size_t n_x = 3;
  std::size_t n_y = 2;
  std::size_t dim = 1;   // N
  bool strict_costly = true;
  std::size_t max_support = 8;
};

namespace detail {

inline Vec increasing_grid(CounterRng& rng, std::size_t n, double start, double step_lo, double step_hi) {
  Vec out;
  double v = start;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(v);
    v += rng.uniform(step_lo, step_hi);
  }
  return out;
}

// Distinct points: sorted scalars when dim == 1, otherwise distinct cells
// of a small integer lattice.
inline std::vector<Point> distinct_points(CounterRng& rng, std::size_t count, std::size_t dim) {
  std::vector<Point> pts;
  if (dim == 1) {
    for (double v : increasing_grid(rng, count, rng.uniform(-1.0, 0.0), 0.25, 1.0)) pts.push_back({v});
    return pts;
  }
  const std::size_t side = 3;
  std::size_t cells = 1;
  for (std::size_t k = 0; k < dim; ++k) cells *= side;
  count = std::min(count, cells);
  std::vector<std::size_t> ids(cells);
  for (std::size_t i = 0; i < cells; ++i) ids[i] = i;
  for (std::size_t i = 0; i < count; ++i) std::swap(ids[i], ids[i + rng.index(cells - i)]);
  for (std::size_t i = 0; i < count; ++i) {
    Point p(dim);
    std::size_t code = ids[i];
    for (std::size_t k = 0; k < dim; ++k, code /= side) p[k] = static_cast<double>(code % side);
    pts.push_back(p);
  }
  return pts;
}

// Random chain through the componentwise order: each level moves to a
// uniformly drawn point weakly above the current one.
inline std::vector<std::size_t> monotone_chain(CounterRng& rng, const std::vector<Point>& pts, std::size_t levels) {
  std::vector<std::size_t> chain;
  std::size_t cur = rng.index(pts.size());
  for (std::size_t l = 0; l < levels; ++l) {
    if (l > 0 && rng.coin(0.6)) {
      std::vector<std::size_t> above;
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (weakly_below(pts[cur], pts[j])) above.push_back(j);
      cur = above[rng.index(above.size())];
    }
    chain.push_back(cur);
  }
  return chain;
}

}  // namespace detail

// Joint law built as a mixture of monotone paths; support pairs appear in
// (theta_a, theta_b) lexicographic order.
inline JointDistribution random_path_mixture(CounterRng& rng, std::size_t levels, const std::vector<Point>& pts,
                                             std::size_t paths) {
  std::map<TypeIndex, double> mass;
  Vec level_w(levels), path_w(paths);
  double total_l = 0.0, total_p = 0.0;
  for (double& w : level_w) total_l += (w = rng.uniform(0.3, 1.0));
  for (double& w : path_w) total_p += (w = rng.uniform(0.2, 1.0));
  for (std::size_t k = 0; k < paths; ++k) {
    auto chain = detail::monotone_chain(rng, pts, levels);
    for (std::size_t l = 0; l < levels; ++l)
      mass[{l, chain[l]}] += (level_w[l] / total_l) * (path_w[k] / total_p);
  }
  JointDistribution dist;
  double total = 0.0;
  for (auto& [key, m] : mass) {
    dist.support.push_back(key);
    dist.prob.push_back(m);
    total += m;
  }
  for (double& p : dist.prob) p /= total;
  return dist;
}

// Instance satisfying every assumption by construction:
//   u_a = theta * b(x), v_a = -C(x) + gamma * theta * b(x)
//   u_b = -c(y) w(theta_b), v_b = rho c(y) w(theta_b) - k(y), w decreasing.
inline ScreeningInstance random_positive_instance(std::uint64_t seed, const PositiveKnobs& knobs) {
  CounterRng rng(seed, 0x5eed);
  ScreeningInstance inst;
  auto& p = inst.productive;
  p.theta_a = detail::increasing_grid(rng, knobs.n_a, rng.uniform(0.2, 1.0), 0.2, 1.0);
  p.x_grid = detail::increasing_grid(rng, knobs.n_x, 0.0, 0.2, 1.0);
  const Vec cost = detail::increasing_grid(rng, knobs.n_x, 0.0, 0.1, 1.5);
  const double gamma = rng.coin(0.5) ? 0.0 : rng.uniform(0.0, 0.5);
  p.u_a.assign(knobs.n_x, Vec(knobs.n_a));
  p.v_a.assign(knobs.n_x, Vec(knobs.n_a));
  for (std::size_t x = 0; x < knobs.n_x; ++x)
    for (std::size_t a = 0; a < knobs.n_a; ++a) {
      p.u_a[x][a] = p.theta_a[a] * p.x_grid[x];
      p.v_a[x][a] = -cost[x] + gamma * p.theta_a[a] * p.x_grid[x];
    }

  auto& c = inst.costly;
  c.theta_b = detail::distinct_points(rng, knobs.n_b, knobs.dim);
  if (knobs.dim > 1)
    for (auto& pt : c.theta_b)
      for (double& v : pt) v *= 2.0 / 3.0;
  const std::size_t ny = std::max<std::size_t>(knobs.n_y, 1);
  c.y0_index = 0;
  for (std::size_t y = 0; y < ny; ++y) c.y_set.push_back({static_cast<double>(y)});
  Vec slope(knobs.dim);
  for (double& s : slope) s = rng.uniform(0.1, 0.5);
  const std::size_t free_y = (!knobs.strict_costly && ny > 1) ? 1 + rng.index(ny - 1) : ny;
  c.u_b.assign(ny, Vec(c.theta_b.size(), 0.0));
  c.v_b.assign(ny, Vec(c.theta_b.size(), 0.0));
  for (std::size_t y = 1; y < ny; ++y) {
    const double scale = rng.uniform(0.3, 1.0);
    const double rho = y == free_y ? 1.0 : rng.uniform(0.0, 0.6);
    const double waste = y == free_y ? 0.0 : rng.uniform(0.03, 0.3);
    for (std::size_t b = 0; b < c.theta_b.size(); ++b) {
      double expo = 0.0;
      for (std::size_t k = 0; k < knobs.dim; ++k) expo += slope[k] * c.theta_b[b][k];
      const double w = std::exp(-expo);
      c.u_b[y][b] = -scale * w;
      c.v_b[y][b] = rho * scale * w - waste;
    }
  }
  const std::size_t per_level = std::max<std::size_t>(1, knobs.max_support / knobs.n_a);
  const std::size_t max_paths = std::min<std::size_t>(3, per_level);
  inst.dist = random_path_mixture(rng, knobs.n_a, c.theta_b, rng.between(1, max_paths));
  return inst;
}

// Instance k of the seeded verification suite: small supports, binary
// instruments, dimension 1 or 2, strictly costly on even k.
inline ScreeningInstance suite_instance(std::uint64_t seed, std::size_t k) {
  CounterRng rng(seed, 0x5017eULL + k);
  PositiveKnobs knobs;
  knobs.n_a = rng.between(1, 4);
  knobs.n_b = rng.between(1, 3);
  knobs.n_x = rng.between(2, 3);
  knobs.n_y = 2;
  knobs.dim = rng.between(1, 2);
  knobs.strict_costly = k % 2 == 0;
  return random_positive_instance(rng.next(), knobs);
}

// Random line instance with strict increasing differences. With
// sorted_surplus the surplus also has increasing differences.
inline OneDimInstance random_line_instance(CounterRng& rng, std::size_t n, std::size_t nx, bool sorted_surplus) {
  OneDimInstance inst;
  inst.theta = detail::increasing_grid(rng, n, rng.uniform(0.0, 1.0), 0.1, 1.0);
  inst.x_grid = detail::increasing_grid(rng, nx, 0.0, 0.2, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += inst.mu.emplace_back(rng.uniform(0.1, 1.0));
  for (double& m : inst.mu) m /= total;
  inst.u.assign(nx, Vec(n));
  inst.v.assign(nx, Vec(n));
  const Vec base = detail::increasing_grid(rng, n, 0.0, 0.0, 0.5);
  for (std::size_t i = 0; i < n; ++i) inst.u[0][i] = base[i];
  for (std::size_t x = 1; x < nx; ++x) {
    const Vec step = detail::increasing_grid(rng, n, rng.uniform(-1.0, 0.2), 0.05, 0.6);
    for (std::size_t i = 0; i < n; ++i) inst.u[x][i] = inst.u[x - 1][i] + step[i];
  }
  const double gamma = rng.uniform(0.05, 1.0);
  Vec shift(nx);
  for (double& s : shift) s = rng.uniform(-1.5, 0.5);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t i = 0; i < n; ++i)
      inst.v[x][i] = sorted_surplus ? shift[x] + (gamma - 1.0) * inst.u[x][i] : rng.uniform(-1.5, 1.0);
  return inst;
}

inline Allocation random_allocation(CounterRng& rng, std::size_t n, std::size_t nx, bool monotone) {
  Allocation x(n);
  for (auto& v : x) v = rng.index(nx);
  if (monotone) std::sort(x.begin(), x.end());
  return x;
}

// Types for the negative-correlation construction: theta_a splits into two
// halves of mass 1/2, and the chosen coordinate of theta_b falls with theta_a.
struct TypeSpace {
  Vec theta_a;
  std::vector<Point> theta_b;
  JointDistribution dist;
};

inline TypeSpace random_negative_types(std::uint64_t seed, std::size_t dim, std::size_t coordinate, double tilt) {
  CounterRng rng(seed, 0x0c0);
  TypeSpace ts;
  const std::size_t half_a = rng.between(1, 3);
  ts.theta_a = detail::increasing_grid(rng, 2 * half_a, rng.uniform(0.0, 1.0), 0.2, 1.0);
  const std::size_t half_b = rng.between(1, 2);
  const Vec coord = detail::increasing_grid(rng, 2 * half_b, rng.uniform(-1.0, 1.0), 0.2, 1.0);
  for (std::size_t j = 0; j < coord.size(); ++j) {
    Point pt(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) pt[k] = k == coordinate ? coord[j] : rng.uniform(-1.0, 1.0);
    ts.theta_b.push_back(pt);
  }
  auto shares = [&](std::size_t count) {
    Vec w(count);
    double total = 0.0;
    for (double& v : w) total += (v = rng.uniform(0.2, 1.0));
    for (double& v : w) v /= total;
    return w;
  };
  const Vec a_lo = shares(half_a), a_hi = shares(half_a), b_lo = shares(half_b), b_hi = shares(half_b);
  for (std::size_t a = 0; a < 2 * half_a; ++a) {
    const bool high_a = a >= half_a;
    const double a_share = high_a ? a_hi[a - half_a] : a_lo[a];
    for (std::size_t b = 0; b < 2 * half_b; ++b) {
      const bool high_b = b >= half_b;
      const double b_share = high_b ? b_hi[b - half_b] : b_lo[b];
      const double quadrant = high_a == high_b ? 0.25 - tilt : 0.25 + tilt;
      if (quadrant * a_share * b_share <= 0.0) continue;
      ts.dist.support.push_back({a, b});
      ts.dist.prob.push_back(quadrant * a_share * b_share);
    }
  }
  double total = 0.0;
  for (double p : ts.dist.prob) total += p;
  for (double& p : ts.dist.prob) p /= total;
  return ts;
}

// Type space k of the seeded converse suite, with the first coordinate of
// theta_b falling in theta_a.
inline TypeSpace converse_suite_types(std::uint64_t seed, std::size_t k) {
  CounterRng rng(seed, 0xc0e5eULL + k);
  const std::size_t dim = rng.between(1, 2);
  const double tilt = rng.uniform(0.02, 0.2);
  return random_negative_types(rng.next(), dim, 0, tilt);
}

}  // namespace screenkit
