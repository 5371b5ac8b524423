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
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "screenkit/common.hpp"

namespace screenkit {

// Single-line screening problem: types theta[0] < ... < theta[n-1] with
// positive weights mu; u and v are indexed [allocation][type].
struct OneDimInstance {
  Vec theta;
  Vec mu;
  Vec x_grid;
  Table u;
  Table v;

  std::size_t n() const { return theta.size(); }
  std::size_t num_x() const { return x_grid.size(); }
  double surplus(std::size_t x, std::size_t i) const { return u[x][i] + v[x][i]; }
};

using Allocation = std::vector<std::size_t>;

inline void check_structure(const OneDimInstance& inst) {
  if (inst.theta.empty() || inst.x_grid.empty()) throw StructuralError("empty one-dimensional instance");
  if (inst.mu.size() != inst.n()) throw StructuralError("mu length must equal number of types");
  for (double m : inst.mu)
    if (!(m > 0.0)) throw StructuralError("type weights must be positive");
  for (const Table* tab : {&inst.u, &inst.v}) {
    if (tab->size() != inst.num_x()) throw StructuralError("table rows must equal |x_grid|");
    for (const auto& row : *tab)
      if (row.size() != inst.n()) throw StructuralError("table columns must equal number of types");
  }
}

// Origins and destinations of the U-shaped stretches of an allocation.
// Indices are 0-based; a missing destination is recorded as n.
struct URegions {
  std::vector<std::pair<std::size_t, std::size_t>> regions;
  std::vector<std::size_t> monotone;  // indices whose local downward IC binds

  bool in_monotone(std::size_t j) const {
    return std::find(monotone.begin(), monotone.end(), j) != monotone.end();
  }
};

inline URegions u_region_decomposition(const Allocation& x) {
  const std::size_t n = x.size();
  URegions out;
  std::size_t i = 0;
  while (i + 1 < n) {
    if (x[i + 1] >= x[i]) {
      ++i;
      continue;
    }
    const std::size_t origin = i;
    std::size_t dest = origin + 1;
    while (dest < n && x[dest] <= x[origin]) ++dest;
    out.regions.emplace_back(origin, dest);
    if (dest == n) break;
    i = dest;
  }
  std::vector<char> covered(n, 0), kept(n, 0);
  for (std::size_t l = 0; l < out.regions.size(); ++l) {
    auto [o, d] = out.regions[l];
    for (std::size_t j = o; j <= std::min(d, n - 1); ++j) covered[j] = 1;
    const bool next_starts_here = l + 1 < out.regions.size() && out.regions[l + 1].first == d;
    if (d < n && !next_starts_here) kept[d] = 1;
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!covered[j] || kept[j]) out.monotone.push_back(j);
  return out;
}

inline Vec closed_form_downward_transfers(const OneDimInstance& inst, const Allocation& x) {
  const std::size_t n = inst.n();
  const auto& u = inst.u;
  const URegions ur = u_region_decomposition(x);
  Vec t(n);
  for (std::size_t i = 0; i < n; ++i) {
    double local = 0.0;
    for (std::size_t j : ur.monotone)
      if (j < i) local += u[x[j]][j + 1] - u[x[j]][j];
    double nonlocal = 0.0;
    for (auto [o, d] : ur.regions)
      if (o < i) nonlocal += u[x[o]][std::min(d, i)] - u[x[o]][o];
    t[i] = u[x[i]][i] - local - nonlocal;
  }
  return t;
}

enum class ConstraintSet { downward, all };

// Largest transfers satisfying IR and the chosen IC constraints: shortest
// distances from a virtual source in the difference-constraint graph.
inline Vec graph_optimal_transfers(const OneDimInstance& inst, const Allocation& x, ConstraintSet set) {
  const std::size_t n = inst.n();
  const auto& u = inst.u;
  struct Edge {
    std::size_t from, to;
    double w;
  };
  std::vector<Edge> edges;
  const std::size_t source = n;
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({source, i, u[x[i]][i]});
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || (set == ConstraintSet::downward && j > i)) continue;
      edges.push_back({j, i, u[x[i]][i] - u[x[j]][i]});
    }
  }
  Vec dist(n + 1, std::numeric_limits<double>::infinity());
  dist[source] = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (const auto& e : edges)
      if (dist[e.from] + e.w < dist[e.to]) {
        dist[e.to] = dist[e.from] + e.w;
        changed = true;
      }
    if (!changed) break;
  }
  for (const auto& e : edges)
    if (dist[e.from] + e.w < dist[e.to] - 1e-12) throw NotImplementable("negative cycle in IC constraint graph");
  dist.pop_back();
  return dist;
}

// Slack of IC[i -> j]: truthful payoff of type i minus its payoff from j's option.
inline double ic_slack(const OneDimInstance& inst, const Allocation& x, const Vec& t, std::size_t i, std::size_t j) {
  return (inst.u[x[i]][i] - t[i]) - (inst.u[x[j]][i] - t[j]);
}

inline double ir_slack(const OneDimInstance& inst, const Allocation& x, const Vec& t, std::size_t i) {
  return inst.u[x[i]][i] - t[i];
}

struct LineViolation {
  std::size_t from = 0;
  std::size_t to = 0;
  double gain = 0.0;
};

enum class LineDirection { all, downward, upward };

inline std::vector<LineViolation> check_ic(const OneDimInstance& inst, const Allocation& x, const Vec& t,
                                           LineDirection dir) {
  std::vector<LineViolation> out;
  for (std::size_t i = 0; i < inst.n(); ++i)
    for (std::size_t j = 0; j < inst.n(); ++j) {
      if (i == j) continue;
      if (dir == LineDirection::downward && j > i) continue;
      if (dir == LineDirection::upward && j < i) continue;
      const double gain = -ic_slack(inst, x, t, i, j);
      if (gain > kFeasTol) out.push_back({i, j, gain});
    }
  return out;
}

inline std::vector<LineViolation> check_ir(const OneDimInstance& inst, const Allocation& x, const Vec& t) {
  std::vector<LineViolation> out;
  for (std::size_t i = 0; i < inst.n(); ++i)
    if (ir_slack(inst, x, t, i) < -kFeasTol) out.push_back({i, i, -ir_slack(inst, x, t, i)});
  return out;
}

struct BindingItem {
  std::string label;  // 1-based, e.g. "IC[3->1]"
  bool is_ir = false;
  std::size_t from = 0;
  std::size_t to = 0;
  double slack = 0.0;
  bool binds = false;
};

struct BindingReport {
  std::vector<BindingItem> items;
  bool pass = true;
};

inline BindingReport binding_report(const OneDimInstance& inst, const Allocation& x, const Vec& t) {
  const std::size_t n = inst.n();
  const URegions ur = u_region_decomposition(x);
  BindingReport rep;
  auto push = [&](BindingItem item) {
    item.binds = std::abs(item.slack) <= kFeasTol;
    rep.pass = rep.pass && item.binds;
    rep.items.push_back(std::move(item));
  };
  push({"IR[1]", true, 0, 0, ir_slack(inst, x, t, 0), false});
  for (std::size_t i : ur.monotone)
    if (i + 1 < n)
      push({"IC[" + std::to_string(i + 2) + "->" + std::to_string(i + 1) + "]", false, i + 1, i,
            ic_slack(inst, x, t, i + 1, i), false});
  for (auto [o, d] : ur.regions)
    for (std::size_t i = o + 1; i <= std::min(d, n - 1); ++i)
      push({"IC[" + std::to_string(i + 1) + "->" + std::to_string(o + 1) + "]", false, i, o,
            ic_slack(inst, x, t, i, o), false});
  return rep;
}

inline double line_value(const OneDimInstance& inst, const Allocation& x, const Vec& t) {
  double total = 0.0;
  for (std::size_t i = 0; i < inst.n(); ++i) total += inst.mu[i] * (inst.v[x[i]][i] + t[i]);
  return total;
}

inline bool is_monotone(const Allocation& x) { return std::is_sorted(x.begin(), x.end()); }

}  // namespace screenkit
