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

#ifndef FOCE_CERTIFY_H_
#define FOCE_CERTIFY_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foce/deviations.h"
#include "foce/dynamics.h"
#include "foce/games.h"
#include "foce/normal_form.h"

namespace foce {

// Which pointwise inequality a certificate must satisfy. Coarse programs use
// the gradient of a scalar function h; field programs use a weighted field
// family. Stationary programs pair with the tangent part of the utility
// gradient, local ones with the raw gradient.
enum class DualProgram { kCoarseStationary, kCoarseLocal, kFieldsStationary, kFieldsLocal };

const char* to_string(DualProgram program);

using Metric = std::function<double(const Profile&)>;

// Feasible when for every x in the product set
//   gamma + sum_i <grad_i h, Proj_TC grad_i u_i> <= q(x)          (coarse-stationary)
//   gamma - sum_i <grad_i h, grad_i u_i> <= q(x)                  (coarse-local)
//   gamma + sum_f w_f sum_i <f_i, Proj_TC grad_i u_i> <= q(x)     (fields-stationary)
//   gamma - sum_f w_f sum_i <f_i, grad_i u_i> <= q(x)             (fields-local)
// in which case gamma lower-bounds E[q] over the matching equilibria.
struct Certificate {
  DualProgram program = DualProgram::kCoarseStationary;
  std::optional<VectorField> h;
  FieldFamily family;
  std::vector<double> weights;
  double gamma = 0.0;
  Metric q;
  double G_q = 0.0;
  std::string name;
};

// q(x) - gamma - (deviation term); >= 0 means the inequality holds at x.
double certificate_margin(const SmoothGame& game, const Certificate& cert, const Profile& x);

struct GridSpec {
  int resolution = 0;      // points per axis (0: no grid)
  int random_samples = 0;  // boundary-biased seeded samples
  std::uint64_t seed = 0;
};

struct CertificateReport {
  std::string program;
  std::string name;
  double gamma = 0.0;
  double min_margin = 0.0;
  Profile argmin;
  GridSpec grid;
  long long points = 0;

  bool feasible(double tol = 1e-6) const { return min_margin >= -tol; }
  std::string serialize() const;
};

CertificateReport check_certificate(const SmoothGame& game, const Certificate& cert,
                                    const GridSpec& grid);

// Points of a per-set grid: tensor grid for boxes, lattice for simplices,
// filtered bounding grid plus boundary projections for balls and polyhedra.
std::vector<Vector> set_grid(const ConvexSet& set, int resolution);

// Rotational potential for matching pennies on [-1, 1]^2: zero inside the
// unit disk and -M2 phi(r) theta(x) outside, where phi(r) =
// M1 (r - 1)^2 / (1 + M1 (r - 1)) and theta is the quadrant angle that
// decreases at unit rate along the unconstrained flow.
VectorField pennies_lyapunov(double M1, double M2 = 10.0);
// Slack of the radius certificate: 2 / (5 M1 - 2).
double pennies_certificate_slack(double M1);
// Certificate that E[x1^2 + x2^2] <= 1 + slack, written as the lower bound
// E[-(x1^2 + x2^2)] >= -(1 + slack) in coarse-stationary form.
Certificate pennies_radius_certificate(double M1, double M2 = 10.0);

// Distribution over pure profiles, indexed by NormalFormGame flat index.
using ActionDistribution = std::vector<double>;

// sigma'(a) = sum_x w(x) prod_j x_j(a_j)
ActionDistribution induce_action_distribution(const EmpiricalDistribution& dist,
                                              const NormalFormGame& game);

enum class EquilibriumKind { kCoarseCorrelated, kCorrelated, kAverageCoarseCorrelated };

const char* to_string(EquilibriumKind kind);

struct EquilibriumConstraints {
  Matrix rows;  // value = rows * sigma'
  std::vector<std::string> labels;
};

// CCE: one row per (player, deviation). CE: one per (player, a, b != a).
// Average CCE: a single row summing every player's deviation to a_star.
EquilibriumConstraints equilibrium_constraints(const NormalFormGame& game, EquilibriumKind kind,
                                               std::span<const int> a_star = {});

struct EquilibriumReport {
  double max_violation = 0.0;
  std::string worst_constraint;
  std::vector<double> values;
  std::vector<std::string> labels;
  bool holds = true;
  std::string serialize() const;
};

EquilibriumReport check_equilibrium(const NormalFormGame& game, const ActionDistribution& sigma,
                                    EquilibriumKind kind, double tol = 1e-9,
                                    std::span<const int> a_star = {});

enum class Sense { kMinimize, kMaximize };

struct WorstCaseResult {
  double value = 0.0;
  ActionDistribution sigma;
  Vector constraint_duals;
  double normalization_dual = 0.0;
  double complementary_slackness = 0.0;
};

// Optimizes E_sigma'[q] over CCE or CE of the finite game by the dense LP.
WorstCaseResult worst_case_expectation(const NormalFormGame& game, std::span<const double> q,
                                       EquilibriumKind kind, Sense sense);

// Payoff tensors of `costs` are read as non-negative costs C_i.
struct SmoothnessParams {
  double lambda = 1.0;
  double mu = 0.0;
  std::vector<int> a_star;  // empty: social-cost minimizer
};

struct SmoothnessReport {
  bool holds = true;
  double worst_slack = 0.0;
  std::vector<int> a_star;
  std::vector<int> worst_profile;
};

// sum_i C_i(a*_i, a_-i) <= lambda C(a*) + mu C(a) for every a.
SmoothnessReport check_smoothness(const NormalFormGame& costs, const SmoothnessParams& params);
// lambda / (1 - mu); throws InputError when mu >= 1.
double poa_bound(const SmoothnessParams& params);

}  // namespace foce

#endif  // FOCE_CERTIFY_H_
