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
#include <cstdint>
#include <limits>
#include <string>

#include "screenkit/common.hpp"

namespace screenkit {

// Two worker types, quadratic work costs a_i x^2, costly activity costs
// b_L y (low) and b_H y^2 (high).
struct CompetitiveParams {
  double theta_low = 0.5;
  double theta_high = 1.0;
  double a_low = 1.0;
  double a_high = 0.75;
  double b_low = 3.0;
  double b_high = 1.0;
  double coarse_step = 1e-3;
  double fine_step = 1e-5;

  double efficient_x(bool high) const { return high ? theta_high / (2.0 * a_high) : theta_low / (2.0 * a_low); }
  // Payoff of the low type from the efficient offer at a competitive wage.
  double low_rent() const {
    const double x = efficient_x(false);
    return theta_low * x - a_low * x * x;
  }
  // Low type's payoff from an offer (x, y) priced for the high type.
  double low_mimic(double x, double y) const { return theta_high * x - a_low * x * x - b_low * y; }
  double high_payoff(double x, double y) const { return theta_high * x - a_high * x * x - b_high * y * y; }
};

// Throws AssumptionFailed naming the first violated condition.
inline void validate_competitive(const CompetitiveParams& p) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw AssumptionFailed(what);
  };
  need(p.theta_low >= 0.0 && p.theta_high > p.theta_low, "type ordering theta_H > theta_L >= 0");
  need(p.a_high > 0.0 && p.a_low > p.a_high, "marginal work cost lower for the high type");
  need(p.efficient_x(false) > 0.0 && p.efficient_x(false) < 1.0, "interior efficient allocation (low)");
  need(p.efficient_x(true) > 0.0 && p.efficient_x(true) < 1.0, "interior efficient allocation (high)");
  const double xh = p.efficient_x(true);
  need(p.low_rent() < p.theta_high * xh - p.a_low * xh * xh, "adverse-selection inequality");
  need(p.b_low > 2.0 * p.a_low, "costly activity steeper than work cost for the low type: c_L'(0) > psi_L'(1)");
  need(p.b_high >= 0.0, "nonnegative activity cost for the high type");
  need(p.low_rent() >= p.low_mimic(1.0, 0.0), "separation by work alone at some x >= x_L^e");
  need(p.coarse_step > 0.0 && p.fine_step > 0.0 && p.fine_step <= p.coarse_step, "grid steps");
}

struct CompetitiveOffer {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
};

struct SeparatingSet {
  CompetitiveOffer low;
  CompetitiveOffer high;
};

struct CompetitiveResult {
  SeparatingSet set;
  double high_payoff = 0.0;
  double best_y0_payoff = 0.0;   // best separating payoff with no costly activity
  double improvement = 0.0;
  double constraint_slack = 0.0; // low rent minus mimic payoff at the high offer
  bool y_positive = false;
  bool self_selection = false;
  bool zero_profit = false;
  bool pareto_certified = false; // no coarse grid point beats the optimum
  std::uint64_t evaluated = 0;
};

// Best high-type payoff among y = 0 offers that deter the low type.
inline double best_separating_without_activity(const CompetitiveParams& p) {
  const double rent = p.low_rent();
  const double disc = p.theta_high * p.theta_high - 4.0 * p.a_low * rent;
  const double xe = p.efficient_x(true);
  if (disc <= 0.0) return p.high_payoff(xe, 0.0);
  const double root_lo = (p.theta_high - std::sqrt(disc)) / (2.0 * p.a_low);
  const double root_hi = (p.theta_high + std::sqrt(disc)) / (2.0 * p.a_low);
  double best = -std::numeric_limits<double>::infinity();
  if (root_lo >= 0.0) best = std::max(best, p.high_payoff(std::min(root_lo, xe), 0.0));
  if (root_hi <= 1.0) best = std::max(best, p.high_payoff(std::max(root_hi, xe), 0.0));
  return best;
}

namespace detail {

struct GridBest {
  double x = 0.0, y = 0.0, value = -std::numeric_limits<double>::infinity();
  std::uint64_t evaluated = 0;
};

// Scans y outer, x inner; only strict improvements replace the incumbent,
// so ties go to the smallest y and then the smallest x.
inline GridBest scan(const CompetitiveParams& p, double x_lo, double x_hi, double y_lo, double y_hi, double step) {
  GridBest best;
  const double rent = p.low_rent();
  const auto nx = static_cast<long>(std::llround((x_hi - x_lo) / step));
  const auto ny = static_cast<long>(std::llround((y_hi - y_lo) / step));
  for (long j = 0; j <= ny; ++j) {
    const double y = std::min(1.0, y_lo + step * j);
    for (long i = 0; i <= nx; ++i) {
      const double x = std::min(1.0, x_lo + step * i);
      ++best.evaluated;
      if (p.low_mimic(x, y) > rent) continue;
      const double value = p.high_payoff(x, y);
      if (value > best.value) best = {x, y, value, best.evaluated};
    }
  }
  return best;
}

}  // namespace detail

inline CompetitiveResult competitive_separating(const CompetitiveParams& p) {
  validate_competitive(p);
  const auto coarse = detail::scan(p, 0.0, 1.0, 0.0, 1.0, p.coarse_step);
  const double x_lo = std::max(0.0, coarse.x - p.coarse_step), x_hi = std::min(1.0, coarse.x + p.coarse_step);
  const double y_lo = std::max(0.0, coarse.y - p.coarse_step), y_hi = std::min(1.0, coarse.y + p.coarse_step);
  auto fine = detail::scan(p, x_lo, x_hi, y_lo, y_hi, p.fine_step);
  if (fine.value < coarse.value) fine = {coarse.x, coarse.y, coarse.value, fine.evaluated};

  CompetitiveResult out;
  out.evaluated = coarse.evaluated + fine.evaluated;
  const double xl = p.efficient_x(false);
  out.set.low = {xl, 0.0, p.theta_low * xl};
  out.set.high = {fine.x, fine.y, p.theta_high * fine.x};
  out.high_payoff = fine.value;
  out.best_y0_payoff = best_separating_without_activity(p);
  out.improvement = out.high_payoff - out.best_y0_payoff;
  out.constraint_slack = p.low_rent() - p.low_mimic(fine.x, fine.y);
  out.y_positive = fine.y > 0.0;
  const bool low_stays = out.constraint_slack >= -kFeasTol;
  const double high_own = out.high_payoff;
  const double high_mimic = p.theta_low * xl - p.a_high * xl * xl;
  out.self_selection = low_stays && high_own >= high_mimic - kFeasTol;
  out.zero_profit = std::abs(out.set.low.w - p.theta_low * out.set.low.x) <= kFeasTol &&
                    std::abs(out.set.high.w - p.theta_high * out.set.high.x) <= kFeasTol;
  out.pareto_certified = coarse.value <= out.high_payoff + 1e-12;
  return out;
}

}  // namespace screenkit
