// Copyright 2026 The pscd Authors
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
#include <functional>
#include <span>
#include <vector>

#include <gtest/gtest.h>

#include "pscd/energy.hpp"
#include "pscd/error.hpp"
#include "pscd/points.hpp"
#include "pscd/rng.hpp"

/// Expects `stmt` to throw pscd::Error with the given code.
#define EXPECT_PSCD_ERROR(stmt, expected_code)                                              \
  do {                                                                                      \
    try {                                                                                   \
      stmt;                                                                                 \
      ADD_FAILURE() << "expected pscd::Error " << pscd::to_string(expected_code);           \
    } catch (const pscd::Error& e) {                                                        \
      EXPECT_EQ(e.code(), expected_code) << e.what();                                       \
    }                                                                                       \
  } while (0)

namespace pscd::testing {

/// Central difference of f at x along every coordinate.
inline std::vector<double> central_diff(const std::function<double(std::span<const double>)>& f,
                                        std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double x0 = x[j];
    x[j] = x0 + h;
    const double up = f(x);
    x[j] = x0 - h;
    const double down = f(x);
    x[j] = x0;
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

/// max_j |a_j - b_j| / max(|a_j|, |b_j|, floor).
inline double max_rel_diff(std::span<const double> a, std::span<const double> b, double floor) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double scale = std::max({std::abs(a[j]), std::abs(b[j]), floor});
    worst = std::max(worst, std::abs(a[j] - b[j]) / scale);
  }
  return worst;
}

inline PointSet random_points(std::size_t dim, std::size_t n, double lo, double hi, Rng& rng) {
  PointSet out(dim, n);
  for (double& v : out.values()) v = rng.uniform(lo, hi);
  return out;
}

}  // namespace pscd::testing
