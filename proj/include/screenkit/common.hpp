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

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace screenkit {

// Absolute tolerance for constraint feasibility and binding checks.
inline constexpr double kFeasTol = 1e-9;
// Tolerance for comparing objective values across solvers.
inline constexpr double kValueTol = 1e-6;
// Enumeration budget shared by the brute-force solvers.
inline constexpr double kEnumerationGuard = 1e7;

using Vec = std::vector<double>;
using Table = std::vector<Vec>;   // rows indexed by allocation, columns by type
using Point = std::vector<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SCREENKIT_ERROR(Name)                  \
  class Name : public Error {                  \
   public:                                     \
    using Error::Error;                        \
  };

SCREENKIT_ERROR(StructuralError)
SCREENKIT_ERROR(SizeGuardExceeded)
SCREENKIT_ERROR(NotImplementable)
SCREENKIT_ERROR(NotDominated)
SCREENKIT_ERROR(NotMonotone)
SCREENKIT_ERROR(InputNotIC)
SCREENKIT_ERROR(OutOfRange)
SCREENKIT_ERROR(PreconditionFailed)
SCREENKIT_ERROR(RatioMonotonicityFailed)
SCREENKIT_ERROR(AssumptionFailed)

#undef SCREENKIT_ERROR

// Componentwise a <= b.
inline bool weakly_below(const Point& a, const Point& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] > b[k]) return false;
  return true;
}

inline bool all_finite(const Table& t) {
  for (const auto& row : t)
    for (double v : row)
      if (!std::isfinite(v)) return false;
  return true;
}

inline bool strictly_increasing(const Vec& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

}  // namespace screenkit
