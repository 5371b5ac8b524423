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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "screenkit/common.hpp"
#include "screenkit/model.hpp"
#include "screenkit/solver.hpp"
#include "screenkit/stochastics.hpp"
#include "screenkit/transfers.hpp"
#include "screenkit/validation.hpp"

namespace screenkit {

// ---------------------------------------------------------------------------
// No-costly-screening check on a finite instance.

struct TheoremReport {
  ValidationReport assumption_status;
  double v_joint = 0.0;
  double v_productive = 0.0;
  double gap = 0.0;
  Mechanism witness_mechanism;     // y = y0 everywhere, productive optimum
  Mechanism joint_mechanism;       // first optimum found by the joint search
  bool some_optimum_y0 = false;
  bool y0_almost_surely = false;   // every joint optimum uses y0 on positive mass
  std::uint64_t optimum_count = 0;
  bool asserted = false;           // hypotheses hold, so the checks below count
  bool pass = true;
};

// Lifts a productive-only line solution to every support point, with y0.
inline Mechanism lift_productive(const ScreeningInstance& inst, const Marginal& marg, const LineSolution& sol) {
  Mechanism m;
  for (const auto& type : inst.dist.support) {
    const auto pos = std::find(marg.level.begin(), marg.level.end(), type.a) - marg.level.begin();
    const auto k = static_cast<std::size_t>(pos);
    const bool known = k < marg.level.size();
    m.x.push_back(known ? sol.x[k] : 0);
    m.y.push_back(inst.costly.y0_index);
    m.t.push_back(known ? sol.t[k] : 0.0);
  }
  return m;
}

inline TheoremReport verify_theorem1(const ScreeningInstance& inst) {
  TheoremReport rep;
  rep.assumption_status = validate_instance(inst);
  const JointSolution joint = solve_joint(inst);
  const Marginal marg = productive_marginal(inst);
  const LineSolution line = solve_full_1d(marg.line);
  rep.v_joint = joint.value;
  rep.v_productive = line.value;
  rep.gap = joint.value - line.value;
  rep.witness_mechanism = lift_productive(inst, marg, line);
  rep.joint_mechanism = joint.mechanism;
  rep.some_optimum_y0 = joint.some_optimum_y0;
  rep.y0_almost_surely = joint.all_optima_y0;
  rep.optimum_count = joint.optimum_count;
  rep.asserted = rep.assumption_status.theorem_hypotheses_hold();
  if (rep.asserted) {
    const bool value_ok = std::abs(rep.gap) <= kValueTol;
    const bool strict_ok = !rep.assumption_status.strictly_costly() || rep.y0_almost_surely;
    rep.pass = value_ok && rep.some_optimum_y0 && strict_ok;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Mechanisms on one monotone path theta_a -> theta_b.

struct PathMechanism {
  std::vector<std::size_t> levels;  // theta_a indices, increasing
  std::vector<std::size_t> path_b;  // theta_b index at each level
  Vec mass;                         // probability of each level
  Menu options;                     // option of each level
};

inline double path_agent(const ScreeningInstance& inst, const PathMechanism& pm, std::size_t l, const Option& o) {
  return agent_payoff(inst, {pm.levels[l], pm.path_b[l]}, o);
}

inline double path_value(const ScreeningInstance& inst, const PathMechanism& pm) {
  double total = 0.0;
  for (std::size_t l = 0; l < pm.levels.size(); ++l)
    total += pm.mass[l] * principal_payoff(inst, {pm.levels[l], pm.path_b[l]}, pm.options[l]);
  return total;
}

// IC[l -> k] violations along the path, filtered by direction.
inline std::vector<Violation> path_ic(const ScreeningInstance& inst, const PathMechanism& pm, IcDirection dir) {
  std::vector<Violation> out;
  const std::size_t n = pm.levels.size();
  for (std::size_t l = 0; l < n; ++l) {
    const double truthful = path_agent(inst, pm, l, pm.options[l]);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == l || (dir == IcDirection::downward && k > l) || (dir == IcDirection::upward && k < l)) continue;
      const double gain = path_agent(inst, pm, l, pm.options[k]) - truthful;
      if (gain > kFeasTol) out.push_back({l, k, gain});
    }
  }
  return out;
}

inline std::vector<Violation> path_ir(const ScreeningInstance& inst, const PathMechanism& pm) {
  std::vector<Violation> out;
  for (std::size_t l = 0; l < pm.levels.size(); ++l) {
    const double truthful = path_agent(inst, pm, l, pm.options[l]);
    if (truthful < -kFeasTol) out.push_back({l, l, -truthful});
  }
  return out;
}

struct ShiftOutcome {
  PathMechanism shifted;
  double max_payoff_change = 0.0;  // truthful agent payoffs, before vs after
  bool downward_ic = false;
  bool ir = false;
  double principal_before = 0.0;
  double principal_after = 0.0;
  std::size_t upward_violations = 0;
  bool uses_costly = false;        // some positive-mass level had y != y0
};

// Replaces the costly allocation with y0 and refunds its disutility.
inline ShiftOutcome shift_mechanism(const ScreeningInstance& inst, const PathMechanism& pm) {
  if (!path_ic(inst, pm, IcDirection::all).empty() || !path_ir(inst, pm).empty())
    throw InputNotIC("path mechanism is not IC and IR");
  ShiftOutcome out;
  out.shifted = pm;
  const std::size_t y0 = inst.costly.y0_index;
  for (std::size_t l = 0; l < pm.levels.size(); ++l) {
    const Option& o = pm.options[l];
    Option& s = out.shifted.options[l];
    s.y = y0;
    s.t = o.t - inst.costly.u_b[o.y][pm.path_b[l]];
    if (o.y != y0 && pm.mass[l] > 0.0) out.uses_costly = true;
    out.max_payoff_change = std::max(out.max_payoff_change,
        std::abs(path_agent(inst, pm, l, o) - path_agent(inst, out.shifted, l, s)));
  }
  out.downward_ic = path_ic(inst, out.shifted, IcDirection::downward).empty();
  out.ir = path_ir(inst, out.shifted).empty();
  out.upward_violations = path_ic(inst, out.shifted, IcDirection::upward).size();
  out.principal_before = path_value(inst, pm);
  out.principal_after = path_value(inst, out.shifted);
  return out;
}

// Largest transfers making the chosen options IC and IR along the path.
inline Vec path_max_transfers(const ScreeningInstance& inst, const PathMechanism& pm) {
  const std::size_t n = pm.levels.size();
  OneDimInstance line;
  line.mu = pm.mass;
  line.x_grid.resize(n);
  line.u.assign(n, Vec(n));
  line.v.assign(n, Vec(n, 0.0));
  for (std::size_t l = 0; l < n; ++l) {
    line.theta.push_back(static_cast<double>(l));
    line.x_grid[l] = static_cast<double>(l);
  }
  // Option k plays the role of allocation k.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) line.u[k][l] = path_agent(inst, pm, l, {pm.options[k].x, pm.options[k].y, 0.0});
  Allocation identity(n);
  for (std::size_t l = 0; l < n; ++l) identity[l] = l;
  return graph_optimal_transfers(line, identity, ConstraintSet::all);
}

// ---------------------------------------------------------------------------
// Multiplicative family: theta_a u(x) + theta_b . c(y) - t, cost C(x).

struct MultiplicativeInstance {
  Vec theta_a;                 // positive
  std::vector<Point> theta_b;  // nonpositive
  Vec x_grid;                  // in [0, 1], starting at 0
  Vec u;                       // u(x) on x_grid, strictly increasing, u(0) = 0
  std::vector<Point> c;        // c(y) >= 0 per y, c(y0) = 0
  std::size_t y0_index = 0;
  Vec cost;                    // C(x) on x_grid, nondecreasing, C(0) = 0
  JointDistribution dist;
};

inline ScreeningInstance to_screening(const MultiplicativeInstance& mi) {
  ScreeningInstance inst;
  auto& p = inst.productive;
  p.theta_a = mi.theta_a;
  p.x_grid = mi.x_grid;
  p.u_a.assign(mi.x_grid.size(), Vec(mi.theta_a.size()));
  p.v_a.assign(mi.x_grid.size(), Vec(mi.theta_a.size()));
  for (std::size_t x = 0; x < mi.x_grid.size(); ++x)
    for (std::size_t a = 0; a < mi.theta_a.size(); ++a) {
      p.u_a[x][a] = mi.theta_a[a] * mi.u[x];
      p.v_a[x][a] = -mi.cost[x];
    }
  auto& c = inst.costly;
  c.theta_b = mi.theta_b;
  c.y0_index = mi.y0_index;
  for (std::size_t y = 0; y < mi.c.size(); ++y) c.y_set.push_back(mi.c[y]);
  c.u_b.assign(mi.c.size(), Vec(mi.theta_b.size(), 0.0));
  c.v_b.assign(mi.c.size(), Vec(mi.theta_b.size(), 0.0));
  for (std::size_t y = 0; y < mi.c.size(); ++y)
    for (std::size_t b = 0; b < mi.theta_b.size(); ++b) {
      double dot = 0.0;
      for (std::size_t k = 0; k < mi.c[y].size(); ++k) dot += mi.theta_b[b][k] * mi.c[y][k];
      c.u_b[y][b] = dot;
    }
  inst.dist = mi.dist;
  return inst;
}

namespace detail {

// Piecewise-linear interpolation of ys over the increasing xs.
inline double interpolate(const Vec& xs, const Vec& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const std::size_t k = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
  const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return ys[k - 1] + w * (ys[k] - ys[k - 1]);
}

}  // namespace detail

inline double multiplicative_u(const MultiplicativeInstance& mi, double x) {
  return detail::interpolate(mi.x_grid, mi.u, x);
}
inline double multiplicative_u_inverse(const MultiplicativeInstance& mi, double level) {
  return detail::interpolate(mi.u, mi.x_grid, level);
}
inline double multiplicative_cost(const MultiplicativeInstance& mi, double x) {
  return detail::interpolate(mi.x_grid, mi.cost, x);
}

// Continuous-allocation mechanism over the support points.
struct RealOption {
  double x = 0.0;
  std::size_t y = 0;
  double t = 0.0;
};

inline double multiplicative_agent(const MultiplicativeInstance& mi, TypeIndex type, const RealOption& o) {
  double dot = 0.0;
  for (std::size_t k = 0; k < mi.c[o.y].size(); ++k) dot += mi.theta_b[type.b][k] * mi.c[o.y][k];
  return mi.theta_a[type.a] * multiplicative_u(mi, o.x) + dot - o.t;
}

inline double multiplicative_value(const MultiplicativeInstance& mi, const std::vector<RealOption>& mech) {
  double total = 0.0;
  for (std::size_t i = 0; i < mech.size(); ++i) total += mi.dist.prob[i] * (mech[i].t - multiplicative_cost(mi, mech[i].x));
  return total;
}

inline Point ratio_point(const MultiplicativeInstance& mi, TypeIndex type) {
  Point r = mi.theta_b[type.b];
  for (double& v : r) v /= mi.theta_a[type.a];
  return r;
}

inline bool ratio_monotone(const MultiplicativeInstance& mi) {
  std::vector<Point> ratios;
  JointDistribution rd;
  for (std::size_t i = 0; i < mi.dist.size(); ++i) {
    rd.support.push_back({mi.dist.support[i].a, i});
    rd.prob.push_back(mi.dist.prob[i]);
    ratios.push_back(ratio_point(mi, mi.dist.support[i]));
  }
  return check_stochastic_monotonicity(rd, ratios).ok;
}

struct MultiplicativeShift {
  std::vector<RealOption> before;  // after dropping loss-making options
  std::vector<RealOption> after;
  double value_input = 0.0;        // the mechanism as given
  double value_before = 0.0;
  double value_after = 0.0;
  double max_payoff_change = 0.0;
  bool allocation_within = true;   // 0 <= x~ <= x
  bool downward_ic = true;         // over pairs ordered in theta_a and in ratio
  std::size_t dropped = 0;
};

// Drops loss-making options, re-runs best responses, then trades costly
// activity for a lower productive allocation at fixed transfers.
inline MultiplicativeShift shift_multiplicative(const MultiplicativeInstance& mi, const Mechanism& mech) {
  const ScreeningInstance inst = to_screening(mi);
  const std::size_t m = mi.dist.size();
  MultiplicativeShift out;
  out.value_input = expected_principal_payoff(inst, mech);
  Menu menu;
  for (std::size_t i = 0; i < m; ++i) {
    const Option o = mech.option(i);
    if (o.t - mi.cost[o.x] < 0.0) {
      ++out.dropped;
      continue;
    }
    menu.push_back(o);
  }
  menu.push_back({0, mi.y0_index, 0.0});
  const BestResponse br = menu_best_response(inst, menu);
  for (std::size_t i = 0; i < m; ++i) {
    const Option o = br.choice[i] == kOutside ? Option{0, mi.y0_index, 0.0} : menu[br.choice[i]];
    out.before.push_back({mi.x_grid[o.x], o.y, o.t});
  }
  for (std::size_t i = 0; i < m; ++i) {
    const TypeIndex type = mi.dist.support[i];
    const RealOption& o = out.before[i];
    double dot = 0.0;
    for (std::size_t k = 0; k < mi.c[o.y].size(); ++k) dot += mi.theta_b[type.b][k] * mi.c[o.y][k];
    const double level = multiplicative_u(mi, o.x) + dot / mi.theta_a[type.a];
    if (level < -1e-12) throw OutOfRange("shifted utility level is negative");
    RealOption s{multiplicative_u_inverse(mi, std::max(level, 0.0)), mi.y0_index, o.t};
    out.allocation_within = out.allocation_within && s.x >= 0.0 && s.x <= o.x + 1e-12;
    out.after.push_back(s);
    out.max_payoff_change = std::max(out.max_payoff_change,
        std::abs(multiplicative_agent(mi, type, o) - multiplicative_agent(mi, type, s)));
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const TypeIndex hi = mi.dist.support[i], lo = mi.dist.support[j];
      if (!(mi.theta_a[lo.a] < mi.theta_a[hi.a]) || !weakly_below(ratio_point(mi, lo), ratio_point(mi, hi))) continue;
      const double gain = multiplicative_agent(mi, hi, out.after[j]) - multiplicative_agent(mi, hi, out.after[i]);
      if (gain > kFeasTol) out.downward_ic = false;
    }
  out.value_before = multiplicative_value(mi, out.before);
  out.value_after = multiplicative_value(mi, out.after);
  return out;
}

// ---------------------------------------------------------------------------
// Negative-correlation construction with a three-option menu.

struct ConverseArtifacts {
  ScreeningInstance instance;  // constructed utilities f, g with v = 0
  Menu menu;
  double median_a = 0.0;       // m0
  double median_i = 0.0;       // m1
  double eps_star = 0.0;
  double r_val = 0.0;          // lower bound on the menu payoff
  double q_val = 0.0;          // upper bound on productive-only payoffs
  double menu_value = 0.0;     // evaluated best-response payoff
  double productive_value = 0.0;
  double margin = 0.0;         // menu_value - productive_value
  bool certified = false;
};

namespace detail {

// Value m with P(value <= m) = 1/2 exactly (within 1e-12).
inline std::optional<double> clean_median(std::vector<std::pair<double, double>> value_mass) {
  std::sort(value_mass.begin(), value_mass.end());
  double cum = 0.0;
  for (std::size_t k = 0; k < value_mass.size(); ++k) {
    cum += value_mass[k].second;
    const bool last_of_value = k + 1 == value_mass.size() || value_mass[k + 1].first != value_mass[k].first;
    if (last_of_value && std::abs(cum - 0.5) <= 1e-12) return value_mass[k].first;
  }
  return std::nullopt;
}

}  // namespace detail

inline double converse_r(double eps, double p_i_high, double p_hl) {
  return (1.0 - eps) * p_i_high + (2.0 - eps) * p_hl;
}

inline ConverseArtifacts converse_construct(const Vec& theta_a, const std::vector<Point>& theta_b,
                                            const JointDistribution& dist, const Vec& x_grid,
                                            const std::vector<Point>& y_set, std::size_t y0_index,
                                            std::size_t coordinate) {
  if (x_grid.size() < 2 || y_set.size() < 2) throw PreconditionFailed("need |X| > 1 and |Y| > 1");
  if (coordinate >= theta_b.front().size()) throw PreconditionFailed("coordinate out of range");

  // theta^i given theta^0 must be stochastically nonincreasing.
  std::vector<Point> coord_pts;
  JointDistribution coord_dist;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    coord_pts.push_back({-theta_b[dist.support[i].b][coordinate]});
    coord_dist.support.push_back({dist.support[i].a, i});
    coord_dist.prob.push_back(dist.prob[i]);
  }
  if (!check_stochastic_monotonicity(coord_dist, coord_pts).ok)
    throw PreconditionFailed("coordinate is not stochastically nonincreasing in theta_a");

  std::vector<std::pair<double, double>> a_mass, i_mass;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    a_mass.emplace_back(theta_a[dist.support[i].a], dist.prob[i]);
    i_mass.emplace_back(theta_b[dist.support[i].b][coordinate], dist.prob[i]);
  }
  const auto m0 = detail::clean_median(a_mass);
  const auto m1 = detail::clean_median(i_mass);
  if (!m0 || !m1) throw PreconditionFailed("no clean half-half median split");

  double p_i_high = 0.0, p_both_high = 0.0, p_hl = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const bool a_high = theta_a[dist.support[i].a] > *m0;
    const bool i_high = theta_b[dist.support[i].b][coordinate] > *m1;
    if (i_high) p_i_high += dist.prob[i];
    if (a_high && i_high) p_both_high += dist.prob[i];
    if (a_high && !i_high) p_hl += dist.prob[i];
  }
  if (std::abs(p_both_high - 0.25) <= 1e-12) throw PreconditionFailed("binarizations are independent");

  ConverseArtifacts art;
  art.median_a = *m0;
  art.median_i = *m1;
  const std::size_t x0 = 0, x_hat = x_grid.size() - 1;
  const std::size_t y_hat = y0_index == 0 ? 1 : 0;

  auto build = [&](double eps) {
    ScreeningInstance inst;
    auto& p = inst.productive;
    p.theta_a = theta_a;
    p.x_grid = x_grid;
    p.u_a.assign(x_grid.size(), Vec(theta_a.size()));
    p.v_a.assign(x_grid.size(), Vec(theta_a.size(), 0.0));
    for (std::size_t x = 0; x < x_grid.size(); ++x)
      for (std::size_t a = 0; a < theta_a.size(); ++a) {
        const double f = theta_a[a] <= *m0 ? 1.0 : 2.0;
        p.u_a[x][a] = f * (x_grid[x] - x_grid[x0]) / (x_grid[x_hat] - x_grid[x0]);
      }
    auto& c = inst.costly;
    c.theta_b = theta_b;
    c.y_set = y_set;
    c.y0_index = y0_index;
    c.u_b.assign(y_set.size(), Vec(theta_b.size(), 0.0));
    c.v_b.assign(y_set.size(), Vec(theta_b.size(), 0.0));
    for (std::size_t y = 0; y < y_set.size(); ++y)
      for (std::size_t b = 0; b < theta_b.size(); ++b)
        if (y != y0_index) c.u_b[y][b] = theta_b[b][coordinate] <= *m1 ? -1.0 : -eps;
    inst.dist = dist;
    return inst;
  };
  auto menu_for = [&](double eps) {
    return Menu{{x_hat, y0_index, 2.0 - eps}, {x_hat, y_hat, 1.0 - eps}, {x0, y0_index, 0.0}};
  };

  // Finite support: the productive-only payoff never exceeds 1.
  auto q_of = [](double) { return 1.0; };
  double best_eps = 0.01, best_gap = -std::numeric_limits<double>::infinity();
  for (int k = 1; k < 50; ++k) {
    const double eps = 0.01 * k;
    const double gap = converse_r(eps, p_i_high, p_hl) - q_of(eps);
    if (gap > best_gap) best_gap = gap, best_eps = eps;
  }
  const double centre = best_eps;
  for (int k = -10; k <= 10; ++k) {
    const double eps = centre + 0.001 * k;
    if (eps <= 0.0 || eps >= 0.5) continue;
    const double gap = converse_r(eps, p_i_high, p_hl) - q_of(eps);
    if (gap > best_gap + 1e-15) best_gap = gap, best_eps = eps;
  }
  art.eps_star = best_eps;
  art.r_val = converse_r(best_eps, p_i_high, p_hl);
  art.q_val = q_of(best_eps);
  art.instance = build(best_eps);
  art.menu = menu_for(best_eps);
  art.menu_value = menu_best_response(art.instance, art.menu).value;

  const Marginal marg = productive_marginal(art.instance);
  double productive = solve_full_1d(marg.line).value;
  try {
    productive = std::max(productive, solve_full_1d_brute(marg.line, false).value);
  } catch (const SizeGuardExceeded&) {
  }
  art.productive_value = productive;
  art.margin = art.menu_value - productive;
  art.certified = art.margin > kValueTol && art.menu_value >= art.r_val - kFeasTol;
  return art;
}

}  // namespace screenkit
