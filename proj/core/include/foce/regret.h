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

#ifndef FOCE_REGRET_H_
#define FOCE_REGRET_H_

#include <optional>
#include <string>
#include <vector>

#include "foce/deviations.h"
#include "foce/dynamics.h"
#include "foce/games.h"

namespace foce {

// Stationary pairs the field with the tangent part of the utility gradient;
// local pairs the tangent part of the field with the raw gradient.
enum class RegretMode { kStationary, kLocal };

const char* to_string(RegretMode mode);

// sum_i <Proj_TC(x_i) grad_i u_i(x), f_i(x)>
double stationary_pairing(const SmoothGame& game, const Profile& x, const Profile& f);
// sum_i <Proj_TC(x_i) f_i(x), grad_i u_i(x)>
double local_pairing(const SmoothGame& game, const Profile& x, const Profile& f);

double stationary_regret(const EmpiricalDistribution& dist, const SmoothGame& game,
                         const VectorField& field);
double local_regret(const EmpiricalDistribution& dist, const SmoothGame& game,
                    const VectorField& field);

// Time averages over the curve, (1 / tau_bar) * integral, one per field.
std::vector<double> curve_regrets(const Trajectory& traj, const SmoothGame& game,
                                  const FieldFamily& family, RegretMode mode, int nodes = 16);
double curve_stationary_regret(const Trajectory& traj, const SmoothGame& game,
                               const VectorField& field, int nodes = 16);
double curve_local_regret(const Trajectory& traj, const SmoothGame& game,
                          const VectorField& field, int nodes = 16);

// (1 / tau_bar) * integral of q(x(tau)).
double curve_average(const Trajectory& traj, const std::function<double(const Profile&)>& q,
                     int nodes = 16);

// sum_t mu_t (h(x^{t+1}) - h(x^t)) for a gradient field of h.
double telescoping_sum(const Trajectory& traj, const VectorField& field);
// sum_t mu_t * integral over segment t of <grad h(x), dx/dtau>, with the
// velocity taken as the tangent part of the cached gradient. Boxes,
// simplices and acute polyhedra only.
double curve_velocity_pairing(const Trajectory& traj, const VectorField& field, int nodes = 16);

enum class SetClass { kAcute, kCurved, kNoGuarantee };

const char* to_string(SetClass set_class);

struct SetGeometry {
  SetClass set_class = SetClass::kAcute;
  std::vector<double> K;  // per-player curvature bound
  double diameter = 0.0;
};

SetGeometry classify_sets(const std::vector<ConvexSet>& sets);

struct BoundInputs {
  SetClass set_class = SetClass::kAcute;
  std::vector<double> G, L, K;
  double G_h = 0.0;
  double diameter = 0.0;
  int T = 0;
  StepSchedule schedule = StepSchedule::InverseSqrt(1.0);
};

BoundInputs bound_inputs(const SmoothGame& game, const StepSchedule& schedule, int T, double G_h);

// Right-hand side of the trajectory regret guarantee; nullopt when the sets
// carry no guarantee (non-acute polyhedra).
std::optional<double> bound_formula(const BoundInputs& in);
// 1 + sum_i G_h (K_i G_i^2 + L_i sum_j G_j)
double poly_factor(const BoundInputs& in);

struct RegretEntry {
  std::string field_id;
  double raw = 0.0;
  double epsilon = 0.0;
  std::optional<double> bound;
  bool within_bound = true;
  // Local mode with a field that is neither a gradient nor tangential.
  bool flagged = false;
};

struct RegretReport {
  RegretMode mode = RegretMode::kStationary;
  std::string estimator;
  std::string set_class;
  int steps = 0;
  std::string schedule;
  std::vector<RegretEntry> entries;
  // max |raw| in stationary mode, max raw in local mode, 0 when empty.
  double family_max = 0.0;

  bool all_within_bound() const;
  std::string serialize() const;
};

// Slack allowed on top of the bound for quadrature error.
inline constexpr double kBoundSlack = 1e-6;

RegretReport regret_report(const Trajectory& traj, const SmoothGame& game,
                           const FieldFamily& family, RegretMode mode, int nodes = 16);
RegretReport regret_report(const EmpiricalDistribution& dist, const SmoothGame& game,
                           const FieldFamily& family, RegretMode mode);

}  // namespace foce

#endif  // FOCE_REGRET_H_
