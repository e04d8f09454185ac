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

#include "foce/certify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "foce/errors.h"
#include "foce/lp.h"
#include "foce/regret.h"

namespace foce {

const char* to_string(DualProgram program) {
  switch (program) {
    case DualProgram::kCoarseStationary: return "coarse-stationary";
    case DualProgram::kCoarseLocal: return "coarse-local";
    case DualProgram::kFieldsStationary: return "fields-stationary";
    case DualProgram::kFieldsLocal: return "fields-local";
  }
  return "unknown";
}

const char* to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::kCoarseCorrelated: return "cce";
    case EquilibriumKind::kCorrelated: return "ce";
    case EquilibriumKind::kAverageCoarseCorrelated: return "average_cce";
  }
  return "unknown";
}

double certificate_margin(const SmoothGame& game, const Certificate& cert, const Profile& x) {
  if (!cert.q) throw InputError("certificate: missing metric q");
  double dev = 0.0;
  switch (cert.program) {
    case DualProgram::kCoarseStationary:
    case DualProgram::kCoarseLocal: {
      if (!cert.h) throw InputError("certificate: coarse program needs h");
      const Profile gh = cert.h->evaluate(x);
      dev = cert.program == DualProgram::kCoarseStationary ? stationary_pairing(game, x, gh)
                                                           : -dot(gh, game.gradients(x));
      break;
    }
    case DualProgram::kFieldsStationary:
    case DualProgram::kFieldsLocal: {
      if (cert.weights.size() != cert.family.size()) {
        throw InputError("certificate: need one weight per field");
      }
      const bool stationary = cert.program == DualProgram::kFieldsStationary;
      const Profile grad = game.gradients(x);
      Profile proj;
      if (stationary) proj = tangent_part(game.sets(), x, grad);
      for (std::size_t k = 0; k < cert.family.size(); ++k) {
        if (cert.weights[k] == 0.0) continue;
        const Profile f = cert.family[k].evaluate(x);
        dev += cert.weights[k] * (stationary ? dot(f, proj) : -dot(f, grad));
      }
      break;
    }
  }
  return cert.q(x) - cert.gamma - dev;
}

std::vector<Vector> set_grid(const ConvexSet& set, int resolution) {
  if (resolution < 1) throw InputError("grid resolution must be >= 1");
  const int d = set.dim();
  std::vector<Vector> pts;
  if (set.kind() == SetKind::kSimplex) {
    const int K = std::max(resolution - 1, 1);
    std::vector<int> c(d, 0);
    // Compositions of K into d parts.
    std::function<void(int, int)> rec = [&](int k, int left) {
      if (k == d - 1) {
        c[k] = left;
        Vector v(d);
        for (int j = 0; j < d; ++j) v(j) = static_cast<double>(c[j]) / K;
        pts.push_back(v);
        return;
      }
      for (int a = left; a >= 0; --a) {
        c[k] = a;
        rec(k + 1, left - a);
      }
    };
    rec(0, K);
    return pts;
  }
  const Vector lo = set.bounding_lower(), hi = set.bounding_upper();
  std::vector<int> idx(d, 0);
  while (true) {
    Vector v(d);
    for (int k = 0; k < d; ++k) {
      v(k) = resolution == 1 ? 0.5 * (lo(k) + hi(k))
                             : lo(k) + (hi(k) - lo(k)) * idx[k] / (resolution - 1.0);
    }
    if (set.kind() == SetKind::kBox || set.contains(v, 0.0)) {
      pts.push_back(v);
    } else {
      pts.push_back(set.project(v));
    }
    int k = 0;
    while (k < d && ++idx[k] == resolution) idx[k++] = 0;
    if (k == d) break;
  }
  return pts;
}

std::string CertificateReport::serialize() const {
  std::ostringstream os;
  os << "report = certificate\n";
  os << "program = " << program << "\n";
  os << "name = " << name << "\n";
  os << "gamma = " << format_double(gamma) << "\n";
  os << "min_margin = " << format_double(min_margin) << "\n";
  os << "argmin =";
  for (const Vector& b : argmin) {
    for (int k = 0; k < b.size(); ++k) os << " " << format_double(b(k));
  }
  os << "\n";
  os << "grid.resolution = " << grid.resolution << "\n";
  os << "grid.samples = " << grid.random_samples << "\n";
  os << "grid.seed = " << grid.seed << "\n";
  os << "points = " << points << "\n";
  os << "feasible = " << (feasible() ? "true" : "false") << "\n";
  return os.str();
}

CertificateReport check_certificate(const SmoothGame& game, const Certificate& cert,
                                    const GridSpec& grid) {
  if (grid.resolution <= 0 && grid.random_samples <= 0) {
    throw InputError("check_certificate: empty grid");
  }
  CertificateReport rep;
  rep.program = to_string(cert.program);
  rep.name = cert.name;
  rep.gamma = cert.gamma;
  rep.grid = grid;
  rep.min_margin = std::numeric_limits<double>::infinity();
  auto visit = [&](const Profile& x) {
    const double m = certificate_margin(game, cert, x);
    ++rep.points;
    if (m < rep.min_margin) {
      rep.min_margin = m;
      rep.argmin = x;
    }
  };
  if (grid.resolution > 0) {
    std::vector<std::vector<Vector>> per;
    double total = 1.0;
    for (const ConvexSet& s : game.sets()) {
      per.push_back(set_grid(s, grid.resolution));
      total *= static_cast<double>(per.back().size());
    }
    if (total > 5e7) throw InputError("check_certificate: grid has too many points");
    std::vector<std::size_t> idx(per.size(), 0);
    Profile x(per.size());
    while (true) {
      for (std::size_t i = 0; i < per.size(); ++i) x[i] = per[i][idx[i]];
      visit(x);
      std::size_t i = 0;
      while (i < per.size() && ++idx[i] == per[i].size()) idx[i++] = 0;
      if (i == per.size()) break;
    }
  }
  if (grid.random_samples > 0) {
    Rng rng(grid.seed);
    for (int k = 0; k < grid.random_samples; ++k) visit(sample_profile(game.sets(), rng, 0.5));
  }
  return rep;
}

namespace {

struct LyapunovValue {
  double h = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

LyapunovValue pennies_h(double M1, double M2, double x1, double x2) {
  LyapunovValue out;
  const double r = std::hypot(x1, x2);
  if (r <= 1.0) return out;
  const double u = r - 1.0;
  const double s = 1.0 + M1 * u;
  const double phi = M1 * u * u / s;
  const double dphi = 1.0 - 1.0 / (s * s);
  // Quadrant angle: decreases at unit rate along (-x2, x1).
  const double theta = x1 * x2 > 0.0 ? std::atan(x1 / x2) : std::atan(-x2 / x1);
  out.h = -M2 * phi * theta;
  // grad theta = (x2, -x1) / r^2 on both branches.
  out.d1 = -M2 * (dphi * theta * x1 / r + phi * x2 / (r * r));
  out.d2 = -M2 * (dphi * theta * x2 / r - phi * x1 / (r * r));
  return out;
}

}  // namespace

VectorField pennies_lyapunov(double M1, double M2) {
  if (!(M1 > 0.4) || !(M2 > 0.0)) throw InputError("pennies_lyapunov: need M1 > 2/5 and M2 > 0");
  // On [-1, 1]^2, r <= sqrt(2), phi' < 1, phi <= r - 1 and theta <= pi/2.
  const double G = M2 * std::hypot(std::numbers::pi / 2.0, std::sqrt(2.0) - 1.0);
  // Crude: phi'' <= 2 M1.
  const double L = M2 * (std::numbers::pi * M1 + 6.0);
  FieldFn eval = [M1, M2](const Profile& x) {
    const LyapunovValue v = pennies_h(M1, M2, x[0](0), x[1](0));
    return Profile{Vector::Constant(1, v.d1), Vector::Constant(1, v.d2)};
  };
  PotentialFn pot = [M1, M2](const Profile& x) { return pennies_h(M1, M2, x[0](0), x[1](0)).h; };
  return VectorField::Custom("pennies_lyapunov M1=" + format_double(M1), {1, 1}, std::move(eval),
                             G, L, std::move(pot));
}

double pennies_certificate_slack(double M1) {
  if (!(M1 > 0.4)) throw InputError("pennies certificate: need M1 > 2/5");
  return 2.0 / (5.0 * M1 - 2.0);
}

Certificate pennies_radius_certificate(double M1, double M2) {
  const VectorField h = pennies_lyapunov(M1, M2);
  FieldFn neg = [h](const Profile& x) {
    Profile g = h.evaluate(x);
    for (Vector& b : g) b = -b;
    return g;
  };
  PotentialFn neg_pot = [h](const Profile& x) { return -h.potential(x); };
  Certificate c;
  c.program = DualProgram::kCoarseStationary;
  c.h = VectorField::Custom("neg_pennies_lyapunov", {1, 1}, std::move(neg), h.G(), h.L(),
                            std::move(neg_pot));
  c.gamma = -(1.0 + pennies_certificate_slack(M1));
  c.q = [](const Profile& x) { return -(x[0](0) * x[0](0) + x[1](0) * x[1](0)); };
  c.G_q = 2.0 * std::sqrt(2.0);
  c.name = "pennies_radius M1=" + format_double(M1) + " M2=" + format_double(M2);
  return c;
}

ActionDistribution induce_action_distribution(const EmpiricalDistribution& dist,
                                              const NormalFormGame& game) {
  dist.validate();
  ActionDistribution sigma(game.num_profiles(), 0.0);
  for (std::size_t k = 0; k < dist.points.size(); ++k) {
    const Profile& x = dist.points[k];
    if (static_cast<int>(x.size()) != game.num_players()) {
      throw InputError("induce_action_distribution: wrong number of players");
    }
    for (int i = 0; i < game.num_players(); ++i) {
      if (x[i].size() != game.action_counts()[i]) {
        throw InputError("induce_action_distribution: block size differs from action count");
      }
    }
    for (std::size_t f = 0; f < game.num_profiles(); ++f) {
      double p = dist.weights[k];
      for (int i = 0; i < game.num_players() && p != 0.0; ++i) p *= x[i](game.action_of(f, i));
      sigma[f] += p;
    }
  }
  return sigma;
}

EquilibriumConstraints equilibrium_constraints(const NormalFormGame& game, EquilibriumKind kind,
                                               std::span<const int> a_star) {
  const std::size_t n = game.num_profiles();
  std::vector<Eigen::RowVectorXd> rows;
  EquilibriumConstraints out;
  switch (kind) {
    case EquilibriumKind::kCoarseCorrelated:
      for (int i = 0; i < game.num_players(); ++i) {
        for (int b = 0; b < game.action_counts()[i]; ++b) {
          Eigen::RowVectorXd r(n);
          for (std::size_t f = 0; f < n; ++f) {
            r(f) = game.payoff(i, game.with_action(f, i, b)) - game.payoff(i, f);
          }
          rows.push_back(r);
          out.labels.push_back("p" + std::to_string(i + 1) + " deviate a" + std::to_string(b + 1));
        }
      }
      break;
    case EquilibriumKind::kCorrelated:
      for (int i = 0; i < game.num_players(); ++i) {
        for (int a = 0; a < game.action_counts()[i]; ++a) {
          for (int b = 0; b < game.action_counts()[i]; ++b) {
            if (a == b) continue;
            Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
            for (std::size_t f = 0; f < n; ++f) {
              if (game.action_of(f, i) != a) continue;
              r(f) = game.payoff(i, game.with_action(f, i, b)) - game.payoff(i, f);
            }
            rows.push_back(r);
            out.labels.push_back("p" + std::to_string(i + 1) + " a" + std::to_string(a + 1) +
                                 "->a" + std::to_string(b + 1));
          }
        }
      }
      break;
    case EquilibriumKind::kAverageCoarseCorrelated: {
      if (static_cast<int>(a_star.size()) != game.num_players()) {
        throw InputError("average CCE needs one target action per player");
      }
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
      for (int i = 0; i < game.num_players(); ++i) {
        if (a_star[i] < 0 || a_star[i] >= game.action_counts()[i]) {
          throw InputError("average CCE: target action out of range");
        }
        for (std::size_t f = 0; f < n; ++f) {
          r(f) += game.payoff(i, game.with_action(f, i, a_star[i])) - game.payoff(i, f);
        }
      }
      rows.push_back(r);
      out.labels.push_back("all deviate to a*");
      break;
    }
  }
  out.rows.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < rows.size(); ++k) out.rows.row(k) = rows[k];
  return out;
}

std::string EquilibriumReport::serialize() const {
  std::ostringstream os;
  os << "report = equilibrium\n";
  os << "max_violation = " << format_double(max_violation) << "\n";
  os << "worst_constraint = " << worst_constraint << "\n";
  os << "holds = " << (holds ? "true" : "false") << "\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    os << "constraint." << (k + 1) << " = " << labels[k] << " : " << format_double(values[k])
       << "\n";
  }
  return os.str();
}

namespace {

void validate_action_distribution(const NormalFormGame& game, const ActionDistribution& sigma) {
  if (sigma.size() != game.num_profiles()) {
    throw InputError("action distribution has the wrong number of entries");
  }
  double s = 0.0;
  for (double p : sigma) {
    if (!(p >= -1e-12)) throw InputError("action distribution has a negative entry");
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-9) throw InputError("action distribution does not sum to 1");
}

}  // namespace

EquilibriumReport check_equilibrium(const NormalFormGame& game, const ActionDistribution& sigma,
                                    EquilibriumKind kind, double tol,
                                    std::span<const int> a_star) {
  validate_action_distribution(game, sigma);
  const EquilibriumConstraints c = equilibrium_constraints(game, kind, a_star);
  const Eigen::Map<const Vector> s(sigma.data(), static_cast<Eigen::Index>(sigma.size()));
  const Vector v = c.rows * s;
  EquilibriumReport rep;
  rep.labels = c.labels;
  rep.values.assign(v.data(), v.data() + v.size());
  rep.max_violation = v.size() ? v.maxCoeff() : 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (v(k) == rep.max_violation) {
      rep.worst_constraint = c.labels[k];
      break;
    }
  }
  rep.holds = rep.max_violation <= tol;
  return rep;
}

WorstCaseResult worst_case_expectation(const NormalFormGame& game, std::span<const double> q,
                                       EquilibriumKind kind, Sense sense) {
  if (q.size() != game.num_profiles()) throw InputError("worst_case_expectation: q size");
  if (kind == EquilibriumKind::kAverageCoarseCorrelated) {
    throw InputError("worst_case_expectation: use CCE or CE");
  }
  const EquilibriumConstraints c = equilibrium_constraints(game, kind);
  const int n = static_cast<int>(game.num_profiles());
  LinearProgram lp;
  lp.A_ub = c.rows;
  lp.b_ub = Vector::Zero(c.rows.rows());
  lp.A_eq = Matrix::Ones(1, n);
  lp.b_eq = Vector::Ones(1);
  lp.c.resize(n);
  const double sign = sense == Sense::kMaximize ? 1.0 : -1.0;
  for (int f = 0; f < n; ++f) lp.c(f) = sign * q[f];
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw NumericalError(std::string("worst_case_expectation: LP ") + to_string(sol.status));
  }
  WorstCaseResult res;
  res.sigma.assign(sol.x.data(), sol.x.data() + n);
  res.value = 0.0;
  for (int f = 0; f < n; ++f) res.value += q[f] * sol.x(f);
  res.constraint_duals = sol.dual_ub;
  res.normalization_dual = sign * sol.dual_eq(0);
  res.complementary_slackness = sol.complementary_slackness;
  return res;
}

SmoothnessReport check_smoothness(const NormalFormGame& costs, const SmoothnessParams& params) {
  if (!(params.mu >= 0.0 && params.mu < 1.0)) {
    throw InputError("check_smoothness: mu must lie in [0, 1)");
  }
  const int n = costs.num_players();
  for (int i = 0; i < n; ++i) {
    for (double v : costs.payoffs(i)) {
      if (v < 0.0) throw InputError("check_smoothness: costs must be non-negative");
    }
  }
  auto social = [&](std::size_t f) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += costs.payoff(i, f);
    return s;
  };
  SmoothnessReport rep;
  std::size_t star = 0;
  if (params.a_star.empty()) {
    for (std::size_t f = 1; f < costs.num_profiles(); ++f) {
      if (social(f) < social(star)) star = f;
    }
  } else {
    star = costs.flat_index(params.a_star);
  }
  rep.a_star = costs.actions_of(star);
  const double c_star = social(star);
  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < costs.num_profiles(); ++f) {
    double lhs = 0.0;
    for (int i = 0; i < n; ++i) lhs += costs.payoff(i, costs.with_action(f, i, rep.a_star[i]));
    const double slack = params.lambda * c_star + params.mu * social(f) - lhs;
    if (slack < rep.worst_slack) {
      rep.worst_slack = slack;
      rep.worst_profile = costs.actions_of(f);
    }
  }
  rep.holds = rep.worst_slack >= -1e-12;
  return rep;
}

double poa_bound(const SmoothnessParams& params) {
  if (!(params.mu < 1.0)) throw InputError("poa_bound: mu must be < 1");
  if (params.lambda < 0.0 || params.mu < 0.0) throw InputError("poa_bound: negative parameter");
  return params.lambda / (1.0 - params.mu);
}

}  // namespace foce
