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


// Small hand-built instances shared by the test binaries.

#pragma once

#include <string>

#include "screenkit.hpp"

namespace screenkit::fixtures {

inline std::string data_path(const std::string& name) { return std::string(SCREENKIT_DATA_DIR) + "/" + name; }

// Two types and two allocations, u = theta x, v = kappa (1/2 - theta) x.
inline OneDimInstance binary_line(double kappa) {
  OneDimInstance inst;
  inst.theta = {0.0, 1.0};
  inst.mu = {0.5, 0.5};
  inst.x_grid = {0.0, 1.0};
  inst.u = {{0.0, 0.0}, {0.0, 1.0}};
  inst.v = {{0.0, 0.0}, {0.5 * kappa, -0.5 * kappa}};
  return inst;
}

// The binary line lifted to a joint instance with a trivial costly part.
inline ScreeningInstance binary_joint(double kappa) {
  const OneDimInstance line = binary_line(kappa);
  ScreeningInstance inst;
  inst.productive = {line.theta, line.x_grid, line.u, line.v};
  inst.costly.theta_b = {{0.0}};
  inst.costly.y_set = {{0.0}};
  inst.costly.y0_index = 0;
  inst.costly.u_b = {{0.0}};
  inst.costly.v_b = {{0.0}};
  inst.dist = {{{0, 0}, {1, 0}}, {0.5, 0.5}};
  return inst;
}

// kappa = 2.5 plus a binary costly instrument with u_b = theta_b y, comonotone types.
inline ScreeningInstance costly_pair() {
  ScreeningInstance inst = binary_joint(2.5);
  inst.costly.theta_b = {{-1.0}, {0.0}};
  inst.costly.y_set = {{0.0}, {1.0}};
  inst.costly.u_b = {{0.0, 0.0}, {-1.0, 0.0}};
  inst.costly.v_b = {{0.0, 0.0}, {0.0, 0.0}};
  inst.dist = {{{0, 0}, {1, 1}}, {0.5, 0.5}};
  return inst;
}

// Three types at 0, 1/2, 1 with u = theta x on X = {0, 1}.
inline OneDimInstance three_type_line() {
  OneDimInstance inst;
  inst.theta = {0.0, 0.5, 1.0};
  inst.mu = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  inst.x_grid = {0.0, 1.0};
  inst.u = {{0.0, 0.0, 0.0}, {0.0, 0.5, 1.0}};
  inst.v = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  return inst;
}

inline OneDimInstance single_type(double theta) {
  OneDimInstance inst;
  inst.theta = {theta};
  inst.mu = {1.0};
  inst.x_grid = {0.0, 0.5, 1.0};
  inst.u = {{0.0}, {0.5 * theta}, {theta}};
  inst.v = {{0.0}, {-0.125}, {-0.5}};
  return inst;
}

}  // namespace screenkit::fixtures
