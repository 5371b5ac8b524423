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
#include "screenkit/maxflow.hpp"
#include "screenkit/model.hpp"

namespace screenkit {

struct DiscreteDistribution {
  std::vector<Point> points;
  Vec prob;
};

// mass[i][j] pairs point i of the first law with point j of the second.
struct Coupling {
  Table mass;
};

// Weighted monotone paths from theta_a levels to theta_b indices.
// path[k][l] is the theta_b index that path k assigns to levels[l].
struct PathMixture {
  std::vector<std::size_t> levels;
  Vec weight;
  std::vector<std::vector<std::size_t>> path;
};

namespace detail {

inline constexpr double kFlowScale = 1e12;

inline void require_same_dimension(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  auto dim = [](const DiscreteDistribution& d) { return d.points.empty() ? 0 : d.points.front().size(); };
  const std::size_t n = dim(p);
  bool ok = n == dim(q) && n > 0;
  for (const auto* d : {&p, &q})
    for (const auto& pt : d->points) ok = ok && pt.size() == n;
  if (!ok) throw StructuralError("dimension mismatch between distributions");
}

struct FlowCoupling {
  MaxFlow::Cap supply = 0;
  MaxFlow::Cap routed = 0;
  Coupling coupling;
};

// Sources carry floor(p*S), sinks accept ceil(q*S); every supply unit is
// routable exactly when p is dominated by q (up to 1/S per point).
inline FlowCoupling flow_coupling(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  const int np = static_cast<int>(p.points.size());
  const int nq = static_cast<int>(q.points.size());
  const int source = np + nq, sink = source + 1;
  MaxFlow flow(np + nq + 2);
  FlowCoupling out;
  for (int i = 0; i < np; ++i) {
    auto cap = static_cast<MaxFlow::Cap>(std::floor(p.prob[i] * kFlowScale));
    out.supply += cap;
    flow.add_edge(source, i, cap);
  }
  for (int j = 0; j < nq; ++j)
    flow.add_edge(np + j, sink, static_cast<MaxFlow::Cap>(std::ceil(q.prob[j] * kFlowScale)));
  std::vector<std::vector<int>> ids(np, std::vector<int>(nq, -1));
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nq; ++j)
      if (weakly_below(p.points[i], q.points[j])) ids[i][j] = flow.add_edge(i, np + j, MaxFlow::kInf);
  out.routed = flow.run(source, sink);
  out.coupling.mass.assign(np, Vec(nq, 0.0));
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nq; ++j)
      if (ids[i][j] >= 0) out.coupling.mass[i][j] = static_cast<double>(flow.flow_on(ids[i][j])) / kFlowScale;
  return out;
}

}  // namespace detail

// First-order stochastic dominance p <= q under the componentwise order.
inline bool check_dominance(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  detail::require_same_dimension(p, q);
  if (p.points.front().size() == 1) {
    std::vector<double> cuts;
    for (const auto* d : {&p, &q})
      for (const auto& pt : d->points) cuts.push_back(pt[0]);
    auto cdf = [](const DiscreteDistribution& d, double c) {
      double s = 0.0;
      for (std::size_t i = 0; i < d.points.size(); ++i)
        if (d.points[i][0] <= c) s += d.prob[i];
      return s;
    };
    for (double c : cuts)
      if (cdf(p, c) < cdf(q, c) - kFeasTol) return false;
    return true;
  }
  auto fc = detail::flow_coupling(p, q);
  return fc.routed == fc.supply;
}

inline Coupling strassen_coupling(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  detail::require_same_dimension(p, q);
  auto fc = detail::flow_coupling(p, q);
  if (fc.routed != fc.supply) throw NotDominated("no monotone coupling: first law is not dominated");
  return fc.coupling;
}

struct Conditional {
  std::size_t a = 0;                 // theta_a index
  double mass = 0.0;                 // marginal probability of this level
  std::vector<std::size_t> b_index;  // theta_b indices in the conditional support
  DiscreteDistribution law;
};

// Conditional laws of theta_b given each theta_a level that carries mass,
// in increasing theta_a order.
inline std::vector<Conditional> conditionals(const JointDistribution& dist,
                                             const std::vector<Point>& theta_b) {
  std::map<std::size_t, Conditional> by_level;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist.prob[i] <= 0.0) continue;
    auto& c = by_level[dist.support[i].a];
    c.a = dist.support[i].a;
    c.mass += dist.prob[i];
    c.b_index.push_back(dist.support[i].b);
    c.law.points.push_back(theta_b[dist.support[i].b]);
    c.law.prob.push_back(dist.prob[i]);
  }
  std::vector<Conditional> out;
  for (auto& [a, c] : by_level) {
    for (double& w : c.law.prob) w /= c.mass;
    out.push_back(std::move(c));
  }
  return out;
}

struct MonotonicityCheck {
  bool ok = true;
  std::size_t lower_a = 0;  // witnessing theta_a indices when !ok
  std::size_t upper_a = 0;
};

inline MonotonicityCheck check_stochastic_monotonicity(const JointDistribution& dist,
                                                       const std::vector<Point>& theta_b) {
  auto conds = conditionals(dist, theta_b);
  for (std::size_t l = 0; l + 1 < conds.size(); ++l)
    if (!check_dominance(conds[l].law, conds[l + 1].law)) return {false, conds[l].a, conds[l + 1].a};
  return {};
}

namespace detail {

inline PathMixture quantile_paths(const std::vector<Conditional>& conds) {
  std::vector<std::vector<std::size_t>> order(conds.size());
  std::vector<Vec> cum(conds.size());
  Vec cuts{0.0, 1.0};
  for (std::size_t l = 0; l < conds.size(); ++l) {
    const auto& law = conds[l].law;
    auto& ord = order[l];
    ord.resize(law.points.size());
    for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(),
              [&](std::size_t i, std::size_t j) { return law.points[i][0] < law.points[j][0]; });
    double s = 0.0;
    for (std::size_t i : ord) {
      s += law.prob[i];
      cum[l].push_back(s);
      cuts.push_back(std::min(s, 1.0));
    }
    cum[l].back() = 1.0;
  }
  std::sort(cuts.begin(), cuts.end());
  std::map<std::vector<std::size_t>, double> merged;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double width = cuts[k + 1] - cuts[k];
    if (width <= 1e-15) continue;
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    std::vector<std::size_t> path(conds.size());
    for (std::size_t l = 0; l < conds.size(); ++l) {
      std::size_t pos = std::lower_bound(cum[l].begin(), cum[l].end(), mid) - cum[l].begin();
      pos = std::min(pos, cum[l].size() - 1);
      path[l] = conds[l].b_index[order[l][pos]];
    }
    merged[path] += width;
  }
  PathMixture out;
  for (auto& [path, w] : merged) {
    out.path.push_back(path);
    out.weight.push_back(w);
  }
  return out;
}

// Chains monotone couplings between consecutive levels and peels off
// bottleneck trajectories until the level-0 mass is exhausted.
inline PathMixture peeled_paths(const std::vector<Conditional>& conds) {
  PathMixture out;
  const std::size_t levels = conds.size();
  if (levels == 1) {
    for (std::size_t i = 0; i < conds[0].b_index.size(); ++i) {
      out.path.push_back({conds[0].b_index[i]});
      out.weight.push_back(conds[0].law.prob[i]);
    }
    return out;
  }
  std::vector<Table> mass;
  for (std::size_t l = 0; l + 1 < levels; ++l)
    mass.push_back(strassen_coupling(conds[l].law, conds[l + 1].law).mass);
  constexpr double kDust = 1e-14;
  std::map<std::vector<std::size_t>, double> merged;
  for (;;) {
    std::size_t start = 0;
    double best_row = 0.0;
    for (std::size_t i = 0; i < mass[0].size(); ++i) {
      double row = 0.0;
      for (double m : mass[0][i]) row += m;
      if (row > best_row) best_row = row, start = i;
    }
    if (best_row <= 1e-13) break;
    std::vector<std::size_t> local{start};
    bool dead_end = false;
    for (std::size_t l = 0; l + 1 < levels; ++l) {
      const auto& row = mass[l][local.back()];
      std::size_t next = std::max_element(row.begin(), row.end()) - row.begin();
      if (row[next] <= kDust) {
        // Rounding residue with nowhere to go: drop the edge that led here.
        if (l == 0) {
          std::fill(mass[0][local[0]].begin(), mass[0][local[0]].end(), 0.0);
        } else {
          mass[l - 1][local[l - 1]][local[l]] = 0.0;
        }
        dead_end = true;
        break;
      }
      local.push_back(next);
    }
    if (dead_end) continue;
    double bottleneck = mass[0][local[0]][local[1]];
    for (std::size_t l = 1; l + 1 < levels; ++l) bottleneck = std::min(bottleneck, mass[l][local[l]][local[l + 1]]);
    for (std::size_t l = 0; l + 1 < levels; ++l) {
      double& m = mass[l][local[l]][local[l + 1]];
      m = m == bottleneck ? 0.0 : m - bottleneck;
    }
    std::vector<std::size_t> path(levels);
    for (std::size_t l = 0; l < levels; ++l) path[l] = conds[l].b_index[local[l]];
    merged[path] += bottleneck;
  }
  for (auto& [path, w] : merged) {
    out.path.push_back(path);
    out.weight.push_back(w);
  }
  return out;
}

}  // namespace detail

inline PathMixture path_decomposition(const JointDistribution& dist, const std::vector<Point>& theta_b) {
  auto check = check_stochastic_monotonicity(dist, theta_b);
  if (!check.ok) throw NotMonotone("conditional laws are not stochastically nondecreasing");
  auto conds = conditionals(dist, theta_b);
  PathMixture out = theta_b.front().size() == 1 ? detail::quantile_paths(conds) : detail::peeled_paths(conds);
  for (const auto& c : conds) out.levels.push_back(c.a);
  double total = 0.0;
  for (double w : out.weight) total += w;
  for (double& w : out.weight) w /= total;
  return out;
}

inline bool path_is_monotone(const PathMixture& mix, std::size_t k, const std::vector<Point>& theta_b) {
  for (std::size_t l = 0; l + 1 < mix.levels.size(); ++l)
    if (!weakly_below(theta_b[mix.path[k][l]], theta_b[mix.path[k][l + 1]])) return false;
  return true;
}

// Largest |mu(a) * sum_k w_k 1{h_k(a) = b} - P(a, b)| over all (a, b) pairs
// touched by either side.
inline double mixture_error(const PathMixture& mix, const JointDistribution& dist) {
  std::map<TypeIndex, double> diff;
  std::map<std::size_t, double> level_mass;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    diff[dist.support[i]] -= dist.prob[i];
    level_mass[dist.support[i].a] += dist.prob[i];
  }
  for (std::size_t k = 0; k < mix.path.size(); ++k)
    for (std::size_t l = 0; l < mix.levels.size(); ++l) {
      const std::size_t a = mix.levels[l];
      diff[{a, mix.path[k][l]}] += level_mass[a] * mix.weight[k];
    }
  double worst = 0.0;
  for (auto& [key, d] : diff) worst = std::max(worst, std::abs(d));
  return worst;
}

}  // namespace screenkit
