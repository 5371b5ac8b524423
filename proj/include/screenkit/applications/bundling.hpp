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
#include <set>
#include <tuple>
#include <vector>

#include "screenkit/common.hpp"
#include "screenkit/model.hpp"
#include "screenkit/solver.hpp"
#include "screenkit/stochastics.hpp"

namespace screenkit {

// Bundles are bitmasks over G goods; mask 0 is the empty bundle and
// mask 2^G - 1 the grand bundle.
struct BundleInstance {
  std::size_t goods = 2;
  std::vector<Vec> values;  // values[type][mask]
  Vec prob;
  Vec quality_grid;         // shared by qualities and probabilities
  Vec cost;                 // C on quality_grid

  std::size_t grand() const { return (std::size_t{1} << goods) - 1; }
};

inline void check_bundle_instance(const BundleInstance& b) {
  const std::size_t masks = std::size_t{1} << b.goods;
  if (b.goods == 0 || b.values.empty() || b.values.size() != b.prob.size())
    throw StructuralError("bundle instance needs types with probabilities");
  for (const auto& v : b.values) {
    if (v.size() != masks) throw StructuralError("each type needs a value per bundle");
    if (v[0] != 0.0) throw StructuralError("empty bundle must have value 0");
    for (std::size_t s = 0; s < masks; ++s)
      for (std::size_t t = 0; t < masks; ++t)
        if ((s & t) == s && v[s] > v[t]) throw StructuralError("values must be monotone in the bundle");
    if (!(v[b.grand()] > 0.0)) throw StructuralError("grand-bundle value must be positive");
  }
  if (b.quality_grid.size() < 2 || b.quality_grid.front() != 0.0 || b.quality_grid.back() != 1.0 ||
      !strictly_increasing(b.quality_grid))
    throw StructuralError("quality grid must increase from 0 to 1");
  if (b.cost.size() != b.quality_grid.size() || b.cost.front() != 0.0) throw StructuralError("cost must start at 0");
  for (std::size_t k = 1; k < b.cost.size(); ++k)
    if (b.cost[k] < b.cost[k - 1]) throw StructuralError("cost must be nondecreasing");
  for (std::size_t k = 1; k + 1 < b.cost.size(); ++k) {
    const double left = (b.cost[k] - b.cost[k - 1]) / (b.quality_grid[k] - b.quality_grid[k - 1]);
    const double right = (b.cost[k + 1] - b.cost[k]) / (b.quality_grid[k + 1] - b.quality_grid[k]);
    if (right < left - 1e-12) throw StructuralError("cost must be convex on the grid");
  }
}

// Proper nonempty bundles, in mask order.
inline std::vector<std::size_t> substitute_bundles(const BundleInstance& b) {
  std::vector<std::size_t> out;
  for (std::size_t s = 1; s < b.grand(); ++s) out.push_back(s);
  return out;
}

inline bool ratio_monotone(const BundleInstance& b) {
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t k = 0; k < b.values.size(); ++k) order.emplace_back(b.values[k][b.grand()], k);
  std::map<double, std::size_t> level;
  for (auto& [v, k] : order) level.emplace(v, 0);
  std::size_t next = 0;
  for (auto& [v, l] : level) l = next++;
  JointDistribution dist;
  std::vector<Point> ratios;
  for (std::size_t k = 0; k < b.values.size(); ++k) {
    Point r;
    for (std::size_t s : substitute_bundles(b)) r.push_back(b.values[k][s] / b.values[k][b.grand()]);
    if (r.empty()) r.push_back(0.0);
    dist.support.push_back({level[b.values[k][b.grand()]], k});
    dist.prob.push_back(b.prob[k]);
    ratios.push_back(r);
  }
  return check_stochastic_monotonicity(dist, ratios).ok;
}

// theta_a = v*, theta_b = (v^b - v*) over proper nonempty bundles; x is the
// grand-bundle quality and y the substitute probabilities, both on the grid.
inline ScreeningInstance bundling_reduce(const BundleInstance& b) {
  check_bundle_instance(b);
  if (!ratio_monotone(b)) throw RatioMonotonicityFailed("value ratios are not stochastically nondecreasing in v*");
  const auto subs = substitute_bundles(b);
  const std::size_t dim = std::max<std::size_t>(subs.size(), 1);
  ScreeningInstance inst;
  std::map<double, double> grand_mass;
  std::vector<Point> points;
  std::map<std::pair<double, Point>, double> joint;
  for (std::size_t k = 0; k < b.values.size(); ++k) {
    const double vs = b.values[k][b.grand()];
    Point pt(dim, 0.0);
    for (std::size_t j = 0; j < subs.size(); ++j) pt[j] = b.values[k][subs[j]] - vs;
    joint[{vs, pt}] += b.prob[k];
    if (std::find(points.begin(), points.end(), pt) == points.end()) points.push_back(pt);
  }
  std::sort(points.begin(), points.end());
  for (auto& [key, mass] : joint) grand_mass[key.first] += mass;
  auto& p = inst.productive;
  for (auto& [v, m] : grand_mass) p.theta_a.push_back(v);
  p.x_grid = b.quality_grid;
  p.u_a.assign(p.x_grid.size(), Vec(p.theta_a.size()));
  p.v_a.assign(p.x_grid.size(), Vec(p.theta_a.size()));
  for (std::size_t x = 0; x < p.x_grid.size(); ++x)
    for (std::size_t a = 0; a < p.theta_a.size(); ++a) {
      p.u_a[x][a] = p.theta_a[a] * p.x_grid[x];
      p.v_a[x][a] = -b.cost[x];
    }
  auto& c = inst.costly;
  c.theta_b = points;
  c.y0_index = 0;
  std::vector<std::size_t> digits(dim, 0);
  do {
    Point y(dim);
    for (std::size_t j = 0; j < dim; ++j) y[j] = subs.empty() ? 0.0 : b.quality_grid[digits[j]];
    c.y_set.push_back(y);
    if (subs.empty()) break;
  } while (detail::next_tuple(digits, b.quality_grid.size()));
  c.u_b.assign(c.y_set.size(), Vec(points.size(), 0.0));
  c.v_b.assign(c.y_set.size(), Vec(points.size(), 0.0));
  for (std::size_t y = 0; y < c.y_set.size(); ++y)
    for (std::size_t k = 0; k < points.size(); ++k) {
      double dot = 0.0;
      for (std::size_t j = 0; j < dim; ++j) dot += points[k][j] * c.y_set[y][j];
      c.u_b[y][k] = dot;
    }
  for (auto& [key, mass] : joint) {
    const std::size_t a = std::find(p.theta_a.begin(), p.theta_a.end(), key.first) - p.theta_a.begin();
    const std::size_t k = std::find(points.begin(), points.end(), key.second) - points.begin();
    inst.dist.support.push_back({a, k});
    inst.dist.prob.push_back(mass);
  }
  double total = 0.0;
  for (double m : inst.dist.prob) total += m;
  for (double& m : inst.dist.prob) m /= total;
  return inst;
}

struct QualityPrice {
  double quality = 0.0;
  double price = 0.0;

  bool operator<(const QualityPrice& o) const { return std::tie(quality, price) < std::tie(o.quality, o.price); }
};

struct BundlingSolution {
  ScreeningInstance reduced;
  LineSolution line;
  std::vector<QualityPrice> menu;  // distinct options with positive quality
  std::vector<std::size_t> level;  // theta_a index of each line type
  double value = 0.0;
};

inline BundlingSolution solve_bundling(const BundleInstance& b) {
  BundlingSolution out;
  out.reduced = bundling_reduce(b);
  const Marginal marg = productive_marginal(out.reduced);
  out.level = marg.level;
  out.line = solve_full_1d(marg.line);
  out.value = out.line.value;
  std::set<QualityPrice> distinct;
  for (std::size_t i = 0; i < out.line.x.size(); ++i)
    if (out.line.x[i] > 0) distinct.insert({b.quality_grid[out.line.x[i]], out.line.t[i]});
  out.menu.assign(distinct.begin(), distinct.end());
  return out;
}

struct BundlingCertificate {
  double menu_value = 0.0;
  double brute_value = 0.0;
  double tolerance = 0.0;
  std::uint64_t options = 0;    // distinct per-type effective options
  std::uint64_t mechanisms = 0; // option profiles evaluated
  bool pass = false;
};

// Every probabilistic bundling with grid probabilities and grid qualities,
// for at most two consumer types.
inline BundlingCertificate certify_bundling(const BundleInstance& b, double mechanism_guard = 1e7) {
  check_bundle_instance(b);
  if (b.values.size() > 2 || b.goods > 2) throw SizeGuardExceeded("certificate limited to two types and two goods");
  const std::size_t masks = std::size_t{1} << b.goods;
  const std::size_t g = b.quality_grid.size();
  // Effective option: per-bundle alpha * q, and cost sum alpha * C(q).
  std::map<Vec, double> cheapest;
  std::vector<std::size_t> alpha(masks - 1, 0), quality(masks - 1, 0);
  do {
    double mass = 0.0;
    for (std::size_t a : alpha) mass += b.quality_grid[a];
    if (mass > 1.0 + 1e-12) continue;
    std::fill(quality.begin(), quality.end(), 0);
    do {
      Vec effect(masks - 1);
      double cost = 0.0;
      for (std::size_t j = 0; j < masks - 1; ++j) {
        effect[j] = b.quality_grid[alpha[j]] * b.quality_grid[quality[j]];
        cost += b.quality_grid[alpha[j]] * b.cost[quality[j]];
      }
      auto it = cheapest.find(effect);
      if (it == cheapest.end() || cost < it->second) cheapest[effect] = cost;
    } while (detail::next_tuple(quality, g));
  } while (detail::next_tuple(alpha, g));

  std::vector<Vec> effects;
  Vec costs;
  for (auto& [e, c] : cheapest) effects.push_back(e), costs.push_back(c);
  const std::size_t n_opt = effects.size(), types = b.values.size();
  BundlingCertificate cert;
  cert.options = n_opt;
  if (std::pow(static_cast<double>(n_opt), static_cast<double>(types)) > mechanism_guard)
    throw SizeGuardExceeded("bundling certificate exceeds the enumeration guard");
  auto utility = [&](std::size_t type, std::size_t opt) {
    double u = 0.0;
    for (std::size_t j = 0; j < masks - 1; ++j) u += effects[opt][j] * b.values[type][j + 1];
    return u;
  };
  Table util(types, Vec(n_opt));
  for (std::size_t k = 0; k < types; ++k)
    for (std::size_t o = 0; o < n_opt; ++o) util[k][o] = utility(k, o);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(types, 0);
  do {
    ++cert.mechanisms;
    OneDimInstance line;
    line.mu = b.prob;
    line.x_grid.resize(types);
    line.u.assign(types, Vec(types));
    line.v.assign(types, Vec(types, 0.0));
    for (std::size_t k = 0; k < types; ++k) {
      line.theta.push_back(static_cast<double>(k));
      line.x_grid[k] = static_cast<double>(k);
      for (std::size_t l = 0; l < types; ++l) line.u[k][l] = util[l][pick[k]];
    }
    Allocation identity(types);
    for (std::size_t k = 0; k < types; ++k) identity[k] = k;
    Vec t;
    try {
      t = graph_optimal_transfers(line, identity, ConstraintSet::all);
    } catch (const NotImplementable&) {
      continue;
    }
    double value = 0.0;
    for (std::size_t k = 0; k < types; ++k) value += b.prob[k] * (t[k] - costs[pick[k]]);
    best = std::max(best, value);
  } while (detail::next_tuple(pick, n_opt));

  cert.brute_value = best;
  cert.menu_value = solve_bundling(b).value;
  double max_grand = 0.0, lipschitz = 0.0;
  for (const auto& v : b.values) max_grand = std::max(max_grand, v[b.grand()]);
  double step = 0.0;
  for (std::size_t k = 1; k < g; ++k) {
    step = std::max(step, b.quality_grid[k] - b.quality_grid[k - 1]);
    lipschitz = std::max(lipschitz, (b.cost[k] - b.cost[k - 1]) / (b.quality_grid[k] - b.quality_grid[k - 1]));
  }
  cert.tolerance = step * (max_grand + lipschitz);
  cert.pass = cert.menu_value >= cert.brute_value - cert.tolerance;
  return cert;
}

}  // namespace screenkit
