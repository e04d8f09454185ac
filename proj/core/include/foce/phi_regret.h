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

#ifndef FOCE_PHI_REGRET_H_
#define FOCE_PHI_REGRET_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "foce/deviations.h"
#include "foce/dynamics.h"
#include "foce/games.h"
#include "foce/regret.h"

namespace foce {

struct FixedPointResult {
  Profile point;
  // Norm of the tangent part of the combined field at the point. Zero means
  // the combined field lies in the normal cone there.
  double residual = 0.0;
  // Norm of the combined field itself.
  double field_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Point where sum_k weights[k] * family[k] has vanishing tangent part, for
// families of affine fields. Projected gradient descent on ||F(x)||^2 with
// step 1 / (2 lambda_max(P'P)); when that stalls above `tol` on polyhedral
// sets, the affine variational inequality is solved by enumerating faces.
FixedPointResult fixed_point_affine(const FieldFamily& family, std::span<const double> weights,
                                    const std::vector<ConvexSet>& sets, double tol = 1e-10,
                                    int max_iter = 100000);

// Per-field regret of a point mass at x.
std::vector<double> instantaneous_regret(const SmoothGame& game, const Profile& x,
                                         const FieldFamily& family, RegretMode mode);

enum class StepRule { kHarmonic, kLineSearch };

const char* to_string(StepRule rule);

using FixedPointOracle = std::function<FixedPointResult(std::span<const double> weights)>;

struct MatcherOptions {
  double epsilon = 1e-2;
  int max_iter = 10000;
  StepRule rule = StepRule::kHarmonic;
  // Empty: fixed_point_affine on the family.
  FixedPointOracle oracle;
  double oracle_tol = 1e-9;
  // Local mode rejects non-tangential fields unless this is set.
  bool allow_non_tangential = false;
};

struct MatcherLogRow {
  int t = 0;
  double max_mu = 0.0;
  double alpha = 0.0;
  double oracle_residual = 0.0;
  int oracle_iterations = 0;
};

enum class MatcherStatus { kConverged, kMaxIterations, kOracleFailure, kBoundViolated };

const char* to_string(MatcherStatus status);

struct MatcherState {
  RegretMode mode = RegretMode::kStationary;
  // Number of distributions built so far; the initial one is t = 1.
  int t = 1;
  EmpiricalDistribution sigma;
  // Signed regrets (stationary) or their positive parts (local).
  std::vector<double> mu;
  std::vector<double> raw;
  std::vector<MatcherLogRow> log;
  MatcherStatus status = MatcherStatus::kMaxIterations;
  std::string message;
  std::vector<std::string> warnings;
  // sum_i G_i * max_f G_f; the guarantee is max mu <= sqrt(|F| / (t + 1)) * this.
  double bound_constant = 0.0;

  std::string log_csv() const;
};

// Regret-matching over a finite field family. Stops when max |mu| (stationary)
// or max mu_+ (local) is at most epsilon. After every update the guarantee
// above is checked and a violation stops the run with kBoundViolated.
MatcherState regret_match_stationary(const SmoothGame& game, const FieldFamily& family,
                                     const EmpiricalDistribution& sigma1,
                                     const MatcherOptions& options);
MatcherState regret_match_local(const SmoothGame& game, const FieldFamily& family,
                                const EmpiricalDistribution& sigma1,
                                const MatcherOptions& options);

}  // namespace foce

#endif  // FOCE_PHI_REGRET_H_
