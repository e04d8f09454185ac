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

#ifndef FOCE_DYNAMICS_H_
#define FOCE_DYNAMICS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "foce/games.h"
#include "foce/geometry.h"
#include "foce/types.h"

namespace foce {

// How long a discrete step lasts on the curve: mu_t = 1 or mu_t = 1 / eta_t.
enum class MuMode { kUnit, kInverseEta };

const char* to_string(MuMode mode);

class StepSchedule {
 public:
  enum class Kind { kInverseSqrt, kConstant, kCustom };

  // eta_t = C / sqrt(t + 1)
  static StepSchedule InverseSqrt(double C, MuMode mu = MuMode::kInverseEta);
  static StepSchedule Constant(double eta, MuMode mu = MuMode::kUnit);
  // Non-negative, non-increasing. Zero steps require MuMode::kUnit.
  static StepSchedule Custom(std::vector<double> etas, MuMode mu = MuMode::kUnit);

  double eta(int t) const;
  double mu(int t) const;
  Kind kind() const { return kind_; }
  MuMode mu_mode() const { return mu_mode_; }
  double scale() const { return scale_; }
  const std::vector<double>& custom_steps() const { return custom_; }

  // Throws InputError if the schedule cannot provide T valid steps.
  void validate(int T) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::kInverseSqrt;
  MuMode mu_mode_ = MuMode::kInverseEta;
  double scale_ = 1.0;
  std::vector<double> custom_;
};

// Iterates of projected gradient ascent together with the piecewise curve
// x(tau) = Proj(x^t + ((tau - tau_t) / mu_t) g^t) on [tau_t, tau_t + mu_t eta_t).
// Inside a segment the offset s = (tau - tau_t) / mu_t runs over [0, eta_t].
class Trajectory {
 public:
  int num_steps() const { return static_cast<int>(eta_.size()); }
  double tau_bar() const { return tau_.back(); }
  double tau_start(int t) const { return tau_[t]; }
  double eta(int t) const { return eta_[t]; }
  double mu(int t) const { return mu_[t]; }

  Profile iterate(int t) const;
  Profile cached_gradient(int t) const;
  // Offsets s in (0, eta_t) where the curve's active set changes.
  std::span<const double> breakpoints(int t) const;
  // Point at offset s of segment t.
  Profile point(int t, double s) const;
  // Segment containing tau; the last segment owns tau_bar.
  int segment_at(double tau) const;

  const std::vector<ConvexSet>& sets() const { return sets_; }
  const std::vector<int>& dims() const { return dims_; }
  int total_dim() const { return total_dim_; }
  const StepSchedule& schedule() const { return schedule_; }
  // Players held piecewise constant (adversarial regime).
  const std::vector<char>& frozen() const { return frozen_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // One row per iterate: step,tau_start,eta,mu,coord_0,...
  std::string to_csv() const;

 private:
  friend Trajectory run_pga(const SmoothGame&, const Profile&, int, const StepSchedule&);
  friend class TrajectoryBuilder;
  Trajectory() = default;

  std::vector<ConvexSet> sets_;
  std::vector<int> dims_, offsets_;
  int total_dim_ = 0;
  StepSchedule schedule_;
  std::vector<double> x_, g_;
  std::vector<double> eta_, mu_, tau_;
  std::vector<double> bp_;
  std::vector<std::size_t> bp_offset_;
  std::vector<char> frozen_;
  std::vector<std::string> warnings_;
};

Trajectory run_pga(const SmoothGame& game, const Profile& x0, int T,
                   const StepSchedule& schedule);

// Adversary receives the next step index and the iterates so far, and returns
// a full profile whose non-learner blocks are used. Infeasible blocks are
// projected and a warning is recorded on the trajectory.
using Adversary = std::function<Profile(int t, std::span<const Profile> history)>;

// Learners run projected gradient ascent on unit-length curve segments
// (requires MuMode::kInverseEta); everyone else is piecewise constant.
Trajectory run_partial_adversarial(const SmoothGame& game, const std::vector<int>& learners,
                                   const Adversary& adversary, const Profile& x0, int T,
                                   const StepSchedule& schedule);

Profile eval_curve(const Trajectory& traj, double tau);

// dx/dtau. Exact tangent projection on boxes, simplices and acute
// polyhedra; central differences (step 1e-6) elsewhere. Throws
// BreakpointError within 1e-9 of a segment boundary or curve breakpoint.
Profile velocity(const Trajectory& traj, double tau);

// Weighted point cloud standing in for a distribution over profiles.
struct EmpiricalDistribution {
  std::vector<Profile> points;
  std::vector<double> weights;

  // Throws unless weights are non-negative and sum to 1 within 1e-12.
  void validate() const;
  static EmpiricalDistribution point_mass(Profile x);
};

EmpiricalDistribution sample_uniform(const Trajectory& traj, int n, std::uint64_t seed);
EmpiricalDistribution distribution_at(const Trajectory& traj, std::span<const double> taus);

// Integral over [0, tau_bar] of a vector-valued function of the curve point.
// The curve is split at its breakpoints, and additionally wherever
// `signature` changes (bisected), so each piece is smooth. Pieces are
// integrated with `nodes`-point Gauss-Legendre when every moving player has a
// polyhedral set, and with the `nodes`-point midpoint rule otherwise.
using CurveIntegrand = std::function<void(int segment, const Profile& x, std::span<double> out)>;
using CurveSignature = std::function<std::uint64_t(int segment, const Profile& x)>;

std::vector<double> integrate_curve(const Trajectory& traj, int outputs,
                                    const CurveIntegrand& integrand, int nodes = 16,
                                    const CurveSignature& signature = {});

}  // namespace foce

#endif  // FOCE_DYNAMICS_H_
