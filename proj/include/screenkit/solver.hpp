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
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "screenkit/common.hpp"
#include "screenkit/model.hpp"
#include "screenkit/transfers.hpp"

namespace screenkit {

struct LineSolution {
  Allocation x;
  Vec t;
  double value = 0.0;
  std::string certificate;
  std::uint64_t enumerated = 0;
};

namespace detail {

inline double enumeration_size(std::size_t base, std::size_t exponent) {
  return std::pow(static_cast<double>(base), static_cast<double>(exponent));
}

// Advances an odometer over {0..radix-1}^n with the last digit fastest;
// returns false after the final tuple.
inline bool next_tuple(std::vector<std::size_t>& digits, std::size_t radix) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    if (++digits[k] < radix) return true;
    digits[k] = 0;
  }
  return false;
}

}  // namespace detail

// Exact optimum of the downward-only program by enumerating X^n.
inline LineSolution solve_downward_1d(const OneDimInstance& inst) {
  check_structure(inst);
  const std::size_t n = inst.n(), nx = inst.num_x();
  if (detail::enumeration_size(nx, n) > kEnumerationGuard)
    throw SizeGuardExceeded("|X|^n exceeds the enumeration guard");
  LineSolution best;
  best.value = -std::numeric_limits<double>::infinity();
  best.certificate = "brute_force";
  Allocation x(n, 0);
  do {
    Vec t = closed_form_downward_transfers(inst, x);
    const double value = line_value(inst, x, t);
    ++best.enumerated;
    if (value > best.value + 1e-12) {
      best.x = x;
      best.t = std::move(t);
      best.value = value;
    }
  } while (detail::next_tuple(x, nx));
  return best;
}

// Per-type objective of a monotone allocation once every local downward
// constraint binds.
inline double virtual_surplus(const OneDimInstance& inst, std::size_t j, std::size_t x, double mass_above) {
  double value = inst.surplus(x, j) * inst.mu[j];
  if (j + 1 < inst.n()) value -= (inst.u[x][j + 1] - inst.u[x][j]) * mass_above;
  return value;
}

inline LineSolution solve_full_1d(const OneDimInstance& inst) {
  check_structure(inst);
  const std::size_t n = inst.n(), nx = inst.num_x();
  Vec above(n, 0.0);
  for (std::size_t j = n - 1; j-- > 0;) above[j] = above[j + 1] + inst.mu[j + 1];
  // best_from[j][k]: optimal tail value from type j given x_j >= k.
  Table best_from(n + 1, Vec(nx + 1, 0.0));
  for (std::size_t j = n; j-- > 0;) {
    best_from[j][nx] = -std::numeric_limits<double>::infinity();
    for (std::size_t k = nx; k-- > 0;) {
      const double here = virtual_surplus(inst, j, k, above[j]) + best_from[j + 1][k];
      best_from[j][k] = std::max(here, best_from[j][k + 1]);
    }
  }
  LineSolution out;
  out.certificate = "monotone_dp";
  out.x.resize(n);
  std::size_t floor_k = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double target = best_from[j][floor_k];
    std::size_t pick = floor_k;
    for (std::size_t k = floor_k; k < nx; ++k) {
      const double here = virtual_surplus(inst, j, k, above[j]) + best_from[j + 1][k];
      if (here >= target - 1e-12) {
        pick = k;
        break;
      }
    }
    out.x[j] = pick;
    floor_k = pick;
  }
  out.enumerated = n * nx;
  out.t = graph_optimal_transfers(inst, out.x, ConstraintSet::all);
  out.value = line_value(inst, out.x, out.t);
  return out;
}

// Enumeration oracle for the full program: every allocation in X^n (or the
// monotone ones only) with shortest-path transfers; infeasible ones skipped.
inline LineSolution solve_full_1d_brute(const OneDimInstance& inst, bool monotone_only) {
  check_structure(inst);
  const std::size_t n = inst.n(), nx = inst.num_x();
  if (detail::enumeration_size(nx, n) > kEnumerationGuard)
    throw SizeGuardExceeded("|X|^n exceeds the enumeration guard");
  LineSolution best;
  best.value = -std::numeric_limits<double>::infinity();
  best.certificate = "brute_force";
  Allocation x(n, 0);
  do {
    if (monotone_only && !is_monotone(x)) continue;
    ++best.enumerated;
    Vec t;
    try {
      t = graph_optimal_transfers(inst, x, ConstraintSet::all);
    } catch (const NotImplementable&) {
      continue;
    }
    const double value = line_value(inst, x, t);
    if (value > best.value + 1e-12) {
      best.x = x;
      best.t = std::move(t);
      best.value = value;
    }
  } while (detail::next_tuple(x, nx));
  return best;
}

// The productive problem seen through the theta_a marginal: one type per
// theta_a level carrying positive mass.
struct Marginal {
  OneDimInstance line;
  std::vector<std::size_t> level;  // theta_a index of each line type
};

inline Marginal productive_marginal(const ScreeningInstance& inst) {
  const auto& p = inst.productive;
  Vec mass(p.theta_a.size(), 0.0);
  for (std::size_t i = 0; i < inst.dist.size(); ++i) mass[inst.dist.support[i].a] += inst.dist.prob[i];
  Marginal out;
  out.line.x_grid = p.x_grid;
  out.line.u.assign(p.x_grid.size(), {});
  out.line.v.assign(p.x_grid.size(), {});
  for (std::size_t a = 0; a < p.theta_a.size(); ++a) {
    if (!(mass[a] > 0.0)) continue;
    out.level.push_back(a);
    out.line.theta.push_back(p.theta_a[a]);
    out.line.mu.push_back(mass[a]);
    for (std::size_t x = 0; x < p.x_grid.size(); ++x) {
      out.line.u[x].push_back(p.u_a[x][a]);
      out.line.v[x].push_back(p.v_a[x][a]);
    }
  }
  return out;
}

struct JointSolution {
  Mechanism mechanism;
  double value = 0.0;
  std::string certificate = "brute_force";
  std::uint64_t enumerated = 0;       // complete allocations evaluated
  std::uint64_t optimum_count = 0;    // allocations within kFeasTol of the optimum
  bool some_optimum_y0 = false;       // an optimum uses y0 on every support point
  bool all_optima_y0 = true;          // every optimum uses y0 wherever prob > 0
};

namespace detail {

class JointSearch {
 public:
  explicit JointSearch(const ScreeningInstance& inst)
      : inst_(inst),
        m_(inst.dist.size()),
        nx_(inst.num_x()),
        nc_(inst.num_x() * inst.num_y()),
        source_(m_),
        dist_(m_ + 1, Table(m_ + 1, Vec(m_ + 1, kInf))),
        choice_(m_, 0) {
    agent_.assign(m_, Vec(nc_));
    principal_.assign(m_, Vec(nc_));
    first_best_.assign(m_, -kInf);
    for (std::size_t i = 0; i < m_; ++i) {
      const TypeIndex type = inst.dist.support[i];
      for (std::size_t c = 0; c < nc_; ++c) {
        const Option o{c % nx_, c / nx_, 0.0};
        agent_[i][c] = agent_payoff(inst, type, o);
        principal_[i][c] = principal_payoff(inst, type, o);
        first_best_[i] = std::max(first_best_[i], agent_[i][c] + principal_[i][c]);
      }
    }
    tail_bound_.assign(m_ + 1, 0.0);
    for (std::size_t i = m_; i-- > 0;) tail_bound_[i] = tail_bound_[i + 1] + inst.dist.prob[i] * first_best_[i];
    dist_[0][source_][source_] = 0.0;
    best_.value = -kInf;
  }

  JointSolution run() {
    descend(0);
    return best_;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  // Adds point k with choice c on top of the matrix at depth k; returns
  // false when a negative cycle appears.
  bool extend(std::size_t k) {
    const Table& old = dist_[k];
    Table& cur = dist_[k + 1];
    cur = old;
    const std::size_t c = choice_[k];
    auto w_in = [&](std::size_t j) { return agent_[k][c] - agent_[k][choice_[j]]; };   // edge j -> k
    auto w_out = [&](std::size_t j) { return agent_[j][choice_[j]] - agent_[j][c]; };  // edge k -> j
    for (std::size_t x : nodes(k)) {
      double best = x == source_ ? agent_[k][c] : kInf;
      for (std::size_t j = 0; j < k; ++j) best = std::min(best, old[x][j] + w_in(j));
      cur[x][k] = best;
    }
    double to_self = 0.0;
    for (std::size_t y = 0; y < k; ++y) {
      double best = kInf;
      for (std::size_t j = 0; j < k; ++j) best = std::min(best, w_out(j) + old[j][y]);
      cur[k][y] = best;
      to_self = std::min(to_self, best + cur[y][k]);
    }
    if (to_self < -1e-12) return false;
    cur[k][k] = 0.0;
    cur[k][source_] = kInf;
    for (std::size_t x : nodes(k))
      for (std::size_t y = 0; y < k; ++y) cur[x][y] = std::min(cur[x][y], cur[x][k] + cur[k][y]);
    return true;
  }

  std::vector<std::size_t> nodes(std::size_t k) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < k; ++j) out.push_back(j);
    out.push_back(source_);
    return out;
  }

  double partial_value(std::size_t depth) const {
    double total = 0.0;
    for (std::size_t i = 0; i < depth; ++i)
      total += inst_.dist.prob[i] * (principal_[i][choice_[i]] + dist_[depth][source_][i]);
    return total;
  }

  void descend(std::size_t k) {
    if (k == m_) {
      record();
      return;
    }
    for (std::size_t c = 0; c < nc_; ++c) {
      choice_[k] = c;
      if (!extend(k)) continue;
      if (best_.value > -kInf && partial_value(k + 1) + tail_bound_[k + 1] < best_.value - kFeasTol) continue;
      descend(k + 1);
    }
  }

  void record() {
    ++best_.enumerated;
    const double value = partial_value(m_);
    const std::size_t y0 = inst_.costly.y0_index;
    bool uses_y0 = true, uses_y0_on_mass = true;
    for (std::size_t i = 0; i < m_; ++i) {
      if (choice_[i] / nx_ == y0) continue;
      uses_y0 = false;
      if (inst_.dist.prob[i] > 0.0) uses_y0_on_mass = false;
    }
    if (value > best_.value + kFeasTol) {
      best_.value = value;
      best_.optimum_count = 0;
      best_.some_optimum_y0 = false;
      best_.all_optima_y0 = true;
      best_.mechanism = Mechanism{};
      for (std::size_t i = 0; i < m_; ++i) {
        best_.mechanism.x.push_back(choice_[i] % nx_);
        best_.mechanism.y.push_back(choice_[i] / nx_);
        best_.mechanism.t.push_back(dist_[m_][source_][i]);
      }
    } else if (value < best_.value - kFeasTol) {
      return;
    }
    ++best_.optimum_count;
    best_.some_optimum_y0 = best_.some_optimum_y0 || uses_y0;
    best_.all_optima_y0 = best_.all_optima_y0 && uses_y0_on_mass;
  }

  const ScreeningInstance& inst_;
  std::size_t m_, nx_, nc_, source_;
  std::vector<Table> dist_;  // dist_[k]: shortest paths with points 0..k-1 assigned
  std::vector<std::size_t> choice_;
  Table agent_, principal_;
  Vec first_best_, tail_bound_;
  JointSolution best_;
};

}  // namespace detail

// Exact joint optimum over all (x, y) assignments to support points, with
// full pairwise IC. Branch and bound over points in support order.
inline JointSolution solve_joint(const ScreeningInstance& inst) {
  check_structure(inst);
  if (detail::enumeration_size(inst.num_x() * inst.num_y(), inst.dist.size()) > kEnumerationGuard)
    throw SizeGuardExceeded("(|X||Y|)^m exceeds the enumeration guard");
  JointSolution sol = detail::JointSearch(inst).run();
  sol.value = expected_principal_payoff(inst, sol.mechanism);
  return sol;
}

// Continuous family on [0, 1] sampled by the left-endpoint grid.
struct LipschitzFamily {
  std::function<double(double, double)> u;  // (x, theta)
  std::function<double(double, double)> v;
  Vec x_grid;
  std::function<double(double)> cdf = [](double q) { return q; };
};

inline OneDimInstance grid_instance(const LipschitzFamily& fam, std::size_t n) {
  OneDimInstance inst;
  inst.x_grid = fam.x_grid;
  inst.u.assign(fam.x_grid.size(), {});
  inst.v.assign(fam.x_grid.size(), {});
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) / n, hi = static_cast<double>(i + 1) / n;
    inst.theta.push_back(lo);
    inst.mu.push_back(fam.cdf(hi) - fam.cdf(lo));
    for (std::size_t x = 0; x < fam.x_grid.size(); ++x) {
      inst.u[x].push_back(fam.u(fam.x_grid[x], lo));
      inst.v[x].push_back(fam.v(fam.x_grid[x], lo));
    }
  }
  return inst;
}

inline Vec grid_convergence_study(const LipschitzFamily& fam, const std::vector<std::size_t>& levels) {
  Vec values;
  for (std::size_t n : levels) values.push_back(solve_full_1d(grid_instance(fam, n)).value);
  return values;
}

// u = theta x, v = -x / 3, five allocations on [0, 1], uniform types.
inline LipschitzFamily default_lipschitz_family() {
  LipschitzFamily fam;
  fam.u = [](double x, double th) { return th * x; };
  fam.v = [](double x, double) { return -x / 3.0; };
  fam.x_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  return fam;
}

}  // namespace screenkit
