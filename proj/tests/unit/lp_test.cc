// Copyright 2026 The foce Authors. All rights reserved.
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

#include <cmath>

#include <gtest/gtest.h>

#include "foce/lp.h"
#include "foce/types.h"

namespace foce {
namespace {

TEST(Lp, TextbookMaximum) {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36.
  LinearProgram lp;
  lp.A_ub = Matrix(3, 2);
  lp.A_ub << 1, 0, 0, 2, 3, 2;
  lp.b_ub = make_vector({4, 12, 18});
  lp.A_eq = Matrix(0, 2);
  lp.b_eq = Vector(0);
  lp.c = make_vector({3, 5});
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.value, 36.0, 1e-9);
  EXPECT_NEAR(s.x(0), 2.0, 1e-9);
  EXPECT_NEAR(s.x(1), 6.0, 1e-9);
  // Known duals (0, 3/2, 1).
  EXPECT_NEAR(s.dual_ub(0), 0.0, 1e-9);
  EXPECT_NEAR(s.dual_ub(1), 1.5, 1e-9);
  EXPECT_NEAR(s.dual_ub(2), 1.0, 1e-9);
  EXPECT_LT(s.duality_gap, 1e-9);
  EXPECT_LT(s.complementary_slackness, 1e-9);
}

TEST(Lp, EqualityAndNegativeRhs) {
  // max -x - y, x + y = 1, -x <= -0.25 -> any split with x >= 0.25, value -1.
  LinearProgram lp;
  lp.A_ub = Matrix(1, 2);
  lp.A_ub << -1, 0;
  lp.b_ub = make_vector({-0.25});
  lp.A_eq = Matrix::Ones(1, 2);
  lp.b_eq = make_vector({1});
  lp.c = make_vector({-1, -1});
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.value, -1.0, 1e-12);
  EXPECT_GE(s.x(0), 0.25 - 1e-12);
}

TEST(Lp, DetectsInfeasible) {
  LinearProgram lp;
  lp.A_ub = Matrix(1, 1);
  lp.A_ub << 1;
  lp.b_ub = make_vector({-1});
  lp.A_eq = Matrix(0, 1);
  lp.b_eq = Vector(0);
  lp.c = make_vector({1});
  EXPECT_EQ(solve_lp(lp).status, LpStatus::kInfeasible);
}

TEST(Lp, DetectsUnbounded) {
  LinearProgram lp;
  lp.A_ub = Matrix(1, 2);
  lp.A_ub << 1, -1;
  lp.b_ub = make_vector({1});
  lp.A_eq = Matrix(0, 2);
  lp.b_eq = Vector(0);
  lp.c = make_vector({1, 1});
  EXPECT_EQ(solve_lp(lp).status, LpStatus::kUnbounded);
}

// Random two-variable LPs over a bounded region against a fine grid search
// plus weak duality.
TEST(Lp, RandomTwoVariableAgainstGrid) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    LinearProgram lp;
    const int m = 4;
    lp.A_ub = Matrix(m + 2, 2);
    lp.b_ub = Vector(m + 2);
    for (int r = 0; r < m; ++r) {
      lp.A_ub(r, 0) = rng.uniform(-1, 1);
      lp.A_ub(r, 1) = rng.uniform(-1, 1);
      lp.b_ub(r) = rng.uniform(0.2, 1.0);
    }
    lp.A_ub.row(m) << 1, 0;
    lp.A_ub.row(m + 1) << 0, 1;
    lp.b_ub(m) = 2;
    lp.b_ub(m + 1) = 2;
    lp.A_eq = Matrix(0, 2);
    lp.b_eq = Vector(0);
    lp.c = make_vector({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    const LpSolution s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    double best = -1e300;
    const int n = 800;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const Vector x = make_vector({2.0 * i / n, 2.0 * j / n});
        if (((lp.A_ub * x - lp.b_ub).array() <= 1e-12).all()) best = std::max(best, lp.c.dot(x));
      }
    }
    EXPECT_GE(s.value, best - 1e-12);
    EXPECT_LE(s.value, best + 2.0 * 2.0 / n * lp.c.cwiseAbs().sum() + 1e-9);
    // Dual feasibility and weak duality.
    EXPECT_TRUE((s.dual_ub.array() >= -1e-9).all());
    EXPECT_TRUE(((lp.A_ub.transpose() * s.dual_ub - lp.c).array() >= -1e-9).all());
    EXPECT_NEAR(lp.b_ub.dot(s.dual_ub), s.value, 1e-9);
  }
}

}  // namespace
}  // namespace foce
