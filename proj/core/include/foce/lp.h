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

#ifndef FOCE_LP_H_
#define FOCE_LP_H_

#include "foce/types.h"

namespace foce {

// maximize c'x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
// Empty matrices (zero rows) are allowed for either constraint block.
struct LinearProgram {
  Matrix A_ub;
  Vector b_ub;
  Matrix A_eq;
  Vector b_eq;
  Vector c;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Vector x;
  double value = 0.0;
  // Multipliers of the dual  min b_ub'y + b_eq'z,  A_ub'y + A_eq'z >= c,
  // y >= 0.
  Vector dual_ub;
  Vector dual_eq;
  // sum |y_r * slack_r| + sum |x_j * reduced_j|
  double complementary_slackness = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

struct LpOptions {
  double pivot_tol = 1e-11;
  double feasibility_tol = 1e-9;
  int max_iterations = 0;  // 0: 50 * (rows + columns) + 1000
};

// Dense two-phase tableau simplex with Bland's anti-cycling rule.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

const char* to_string(LpStatus status);

}  // namespace foce

#endif  // FOCE_LP_H_
