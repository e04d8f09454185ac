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

#include "foce/phi_regret.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "foce/errors.h"

namespace foce {

const char* to_string(StepRule rule) {
  return rule == StepRule::kHarmonic ? "harmonic" : "line_search";
}

const char* to_string(MatcherStatus status) {
  switch (status) {
    case MatcherStatus::kConverged: return "converged";
    case MatcherStatus::kMaxIterations: return "max_iterations";
    case MatcherStatus::kOracleFailure: return "oracle_failure";
    case MatcherStatus::kBoundViolated: return "bound_violated";
  }
  return "unknown";
}

namespace {

AffineMap combined_map(const FieldFamily& family, std::span<const double> weights) {
  if (weights.size() != family.size() || family.empty()) {
    throw InputError("fixed point: need one weight per field");
  }
  const auto first = family[0].affine();
  if (!first) throw InputError("fixed point: field '" + family[0].name() + "' is not affine");
  AffineMap m{Matrix::Zero(first->P.rows(), first->P.cols()), Vector::Zero(first->q.size())};
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto a = family[k].affine();
    if (!a) throw InputError("fixed point: field '" + family[k].name() + "' is not affine");
    m.P += weights[k] * a->P;
    m.q += weights[k] * a->q;
  }
  return m;
}

double tangent_residual(const AffineMap& F, const std::vector<ConvexSet>& sets,
                        const std::vector<int>& dims, const Vector& flat) {
  const Profile x = unflatten(flat, dims);
  const Profile f = unflatten(F.P * flat + F.q, dims);
  double r = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    r += sets[i].tangent_part(x[i], f[i]).squaredNorm();
  }
  return std::sqrt(r);
}

Vector project_flat(const std::vector<ConvexSet>& sets, const std::vector<int>& dims,
                    const Vector& y) {
  return flatten(project(sets, unflatten(y, dims)));
}

// Exact affine variational inequality on a product of polyhedral sets: for
// each candidate active set S solve
//   P x + q = A_S' lam + E' nu,  A_S x = b_S,  E x = e
// and accept a feasible x with lam >= 0.
bool solve_by_faces(const AffineMap& F, const std::vector<ConvexSet>& sets,
                    const std::vector<int>& dims, double tol, Vector& out) {
  std::vector<LinearDescription> parts;
  int D = 0, m = 0, me = 0;
  for (const ConvexSet& s : sets) {
    auto ld = s.linear_description();
    if (!ld) return false;
    D += s.dim();
    m += static_cast<int>(ld->A.rows());
    me += static_cast<int>(ld->E.rows());
    parts.push_back(std::move(*ld));
  }
  if (m > 20) return false;
  Matrix A = Matrix::Zero(m, D), E = Matrix::Zero(me, D);
  Vector b(m), e(me);
  int r = 0, re = 0, c = 0;
  for (const LinearDescription& ld : parts) {
    const int d = static_cast<int>(ld.A.cols());
    A.block(r, c, ld.A.rows(), d) = ld.A;
    b.segment(r, ld.A.rows()) = ld.b;
    E.block(re, c, ld.E.rows(), d) = ld.E;
    e.segment(re, ld.E.rows()) = ld.e;
    r += static_cast<int>(ld.A.rows());
    re += static_cast<int>(ld.E.rows());
    c += d;
  }
  std::vector<unsigned> masks;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) + me <= D) masks.push_back(mask);
  }
  std::stable_sort(masks.begin(), masks.end(),
                   [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });
  for (unsigned mask : masks) {
    std::vector<int> S;
    for (int j = 0; j < m; ++j) {
      if (mask & (1u << j)) S.push_back(j);
    }
    const int s = static_cast<int>(S.size());
    const int n = D + s + me;
    Matrix K = Matrix::Zero(n, n);
    Vector rhs = Vector::Zero(n);
    K.topLeftCorner(D, D) = F.P;
    rhs.head(D) = -F.q;
    for (int a = 0; a < s; ++a) {
      K.block(0, D + a, D, 1) = -A.row(S[a]).transpose();
      K.block(D + a, 0, 1, D) = A.row(S[a]);
      rhs(D + a) = b(S[a]);
    }
    for (int a = 0; a < me; ++a) {
      K.block(0, D + s + a, D, 1) = -E.row(a).transpose();
      K.block(D + s + a, 0, 1, D) = E.row(a);
      rhs(D + s + a) = e(a);
    }
    const Vector z = K.completeOrthogonalDecomposition().solve(rhs);
    if ((K * z - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) continue;
    if (s > 0 && z.segment(D, s).minCoeff() < -1e-12) continue;
    const Vector x = z.head(D);
    if (m > 0 && (A * x - b).maxCoeff() > 1e-10) continue;
    if (me > 0 && (E * x - e).cwiseAbs().maxCoeff() > 1e-10) continue;
    const Vector xp = project_flat(sets, dims, x);
    if (tangent_residual(F, sets, dims, xp) <= tol) {
      out = xp;
      return true;
    }
  }
  return false;
}

}  // namespace

FixedPointResult fixed_point_affine(const FieldFamily& family, std::span<const double> weights,
                                    const std::vector<ConvexSet>& sets, double tol,
                                    int max_iter) {
  const AffineMap F = combined_map(family, weights);
  const std::vector<int> dims = set_dims(sets);
  int D = 0;
  for (int d : dims) D += d;
  if (F.P.rows() != D) throw InputError("fixed point: family and sets disagree on dimension");

  Vector x(D);
  {
    int o = 0;
    for (const ConvexSet& s : sets) {
      x.segment(o, s.dim()) = s.project(0.5 * (s.bounding_lower() + s.bounding_upper()));
      o += s.dim();
    }
  }
  const Matrix PtP = F.P.transpose() * F.P;
  double lambda_max = 0.0;
  {
    Vector v = Vector::Ones(D) / std::sqrt(static_cast<double>(D));
    for (int it = 0; it < 500; ++it) {
      const Vector w = PtP * v;
      const double nrm = w.norm();
      if (nrm == 0.0) break;
      const double next = v.dot(w);
      v = w / nrm;
      if (std::abs(next - lambda_max) <= 1e-14 * std::max(1.0, next)) {
        lambda_max = next;
        break;
      }
      lambda_max = next;
    }
    // Power iteration underestimates slightly; pad so the step stays safe.
    lambda_max = std::max(lambda_max * (1.0 + 1e-6), PtP.diagonal().maxCoeff());
  }

  FixedPointResult res;
  double residual = tangent_residual(F, sets, dims, x);
  int it = 0;
  if (lambda_max > 0.0) {
    const double step = 1.0 / (2.0 * lambda_max);
    while (it < max_iter && residual > tol) {
      const Vector grad = 2.0 * F.P.transpose() * (F.P * x + F.q);
      const Vector next = project_flat(sets, dims, x - step * grad);
      const double moved = (next - x).norm();
      x = next;
      ++it;
      if (it % 10 == 0 || moved <= 1e-15) residual = tangent_residual(F, sets, dims, x);
      if (moved <= 1e-15) break;
    }
    residual = tangent_residual(F, sets, dims, x);
  }
  if (residual > tol) {
    Vector y;
    if (solve_by_faces(F, sets, dims, tol, y)) {
      x = y;
      residual = tangent_residual(F, sets, dims, x);
    }
  }
  res.point = unflatten(x, dims);
  res.residual = residual;
  res.field_norm = (F.P * x + F.q).norm();
  res.iterations = it;
  res.converged = residual <= tol;
  return res;
}

std::vector<double> instantaneous_regret(const SmoothGame& game, const Profile& x,
                                         const FieldFamily& family, RegretMode mode) {
  std::vector<double> r;
  r.reserve(family.size());
  for (const VectorField& f : family.fields()) {
    const Profile v = f.evaluate(x);
    r.push_back(mode == RegretMode::kStationary ? stationary_pairing(game, x, v)
                                                : local_pairing(game, x, v));
  }
  return r;
}

std::string MatcherState::log_csv() const {
  std::ostringstream os;
  os << "t,max_mu,alpha,oracle_residual,oracle_iterations\n";
  for (const MatcherLogRow& r : log) {
    os << r.t << "," << format_double(r.max_mu) << "," << format_double(r.alpha) << ","
       << format_double(r.oracle_residual) << "," << r.oracle_iterations << "\n";
  }
  return os.str();
}

namespace {

double measure(const std::vector<double>& mu, RegretMode mode) {
  double m = 0.0;
  for (double v : mu) m = std::max(m, mode == RegretMode::kStationary ? std::abs(v) : v);
  return m;
}

double objective(const std::vector<double>& mu, const std::vector<double>& d, double a,
                 RegretMode mode) {
  double s = 0.0;
  for (std::size_t f = 0; f < mu.size(); ++f) {
    double v = mu[f] + a * d[f];
    if (mode == RegretMode::kLocal) v = std::max(v, 0.0);
    s += v * v;
  }
  return s;
}

// Minimizes sum_f phi(mu_f + a d_f) over a in [lo, hi], phi(v) = v^2 or
// max(v, 0)^2. The objective is a convex piecewise quadratic.
double line_search(const std::vector<double>& mu, const std::vector<double>& d, double lo,
                   double hi, RegretMode mode) {
  std::vector<double> cuts{lo, hi};
  if (mode == RegretMode::kLocal) {
    for (std::size_t f = 0; f < mu.size(); ++f) {
      if (d[f] != 0.0) {
        const double a = -mu[f] / d[f];
        if (a > lo && a < hi) cuts.push_back(a);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double best_a = lo, best = objective(mu, d, lo, mode);
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    const double mid = 0.5 * (a + b);
    double num = 0.0, den = 0.0;
    for (std::size_t f = 0; f < mu.size(); ++f) {
      if (mode == RegretMode::kLocal && mu[f] + mid * d[f] <= 0.0) continue;
      num += mu[f] * d[f];
      den += d[f] * d[f];
    }
    const double cand = den > 0.0 ? std::clamp(-num / den, a, b) : a;
    for (double c : {cand, b}) {
      const double v = objective(mu, d, c, mode);
      if (v < best) {
        best = v;
        best_a = c;
      }
    }
  }
  return best_a;
}

MatcherState run_matcher(const SmoothGame& game, const FieldFamily& family,
                         const EmpiricalDistribution& sigma1, const MatcherOptions& opt,
                         RegretMode mode) {
  if (!(opt.epsilon > 0.0)) throw InputError("regret matching: epsilon must be positive");
  if (family.empty()) throw InputError("regret matching: empty field family");
  if (opt.max_iter < 1) throw InputError("regret matching: max_iter must be positive");
  sigma1.validate();
  for (const Profile& x : sigma1.points) {
    if (!contains(game.sets(), x, kActiveTol)) {
      throw InputError("regret matching: initial distribution has an infeasible point");
    }
  }
  MatcherState st;
  st.mode = mode;
  st.t = 1;
  st.sigma = sigma1;
  const std::size_t nf = family.size();
  st.raw.assign(nf, 0.0);
  for (std::size_t f = 0; f < nf; ++f) {
    st.raw[f] = mode == RegretMode::kStationary ? stationary_regret(sigma1, game, family[f])
                                                : local_regret(sigma1, game, family[f]);
  }
  double sum_G = 0.0;
  for (double g : game.G()) sum_G += g;
  st.bound_constant = sum_G * family.max_G();
  auto bound_at = [&](int t) {
    return std::sqrt(static_cast<double>(nf) / (t + 1.0)) * st.bound_constant;
  };
  auto publish = [&]() {
    st.mu = st.raw;
    if (mode == RegretMode::kLocal) {
      for (double& v : st.mu) v = std::max(v, 0.0);
    }
  };
  publish();
  st.log.push_back({st.t, measure(st.raw, mode), 0.0, 0.0, 0});

  FixedPointOracle oracle = opt.oracle;
  if (!oracle) {
    oracle = [&](std::span<const double> w) {
      return fixed_point_affine(family, w, game.sets(), opt.oracle_tol);
    };
  }

  auto check_bound = [&]() {
    const double m = measure(st.raw, mode);
    if (m > bound_at(st.t) * (1.0 + 1e-12) + 1e-12) {
      st.status = MatcherStatus::kBoundViolated;
      st.message = "max regret " + format_double(m) + " exceeds guarantee " +
                   format_double(bound_at(st.t)) + " at t=" + std::to_string(st.t);
      return false;
    }
    return true;
  };
  if (!check_bound()) return st;

  while (measure(st.raw, mode) > opt.epsilon) {
    if (st.t >= opt.max_iter) {
      st.status = MatcherStatus::kMaxIterations;
      st.message = "iteration cap reached";
      return st;
    }
    const std::vector<double>& w = st.mu;
    const FixedPointResult fp = oracle(w);
    // Never trust the oracle's own residual.
    const VectorField F = combine(family, w, mode == RegretMode::kLocal);
    double residual = 0.0;
    if (fp.point.size() != game.sets().size() || !contains(game.sets(), fp.point, kActiveTol)) {
      residual = std::numeric_limits<double>::infinity();
    } else {
      residual = std::sqrt(squared_norm(tangent_part(game.sets(), fp.point, F.evaluate(fp.point))));
    }
    if (!(residual <= std::max(10.0 * opt.oracle_tol, 1e-9))) {
      st.status = MatcherStatus::kOracleFailure;
      st.message = "fixed-point residual " + format_double(residual) + " at t=" +
                   std::to_string(st.t);
      return st;
    }
    const std::vector<double> r = instantaneous_regret(game, fp.point, family, mode);
    const double harmonic = 1.0 / (st.t + 1.0);
    double alpha = harmonic;
    if (opt.rule == StepRule::kLineSearch) {
      std::vector<double> d(nf);
      for (std::size_t f = 0; f < nf; ++f) d[f] = r[f] - st.raw[f];
      alpha = line_search(st.raw, d, 1e-12, 1.0 - 1e-12, mode);
      if (objective(st.raw, d, alpha, mode) > objective(st.raw, d, harmonic, mode)) {
        alpha = harmonic;
      }
    }
    for (std::size_t f = 0; f < nf; ++f) st.raw[f] = (1.0 - alpha) * st.raw[f] + alpha * r[f];
    for (double& wk : st.sigma.weights) wk *= (1.0 - alpha);
    st.sigma.points.push_back(fp.point);
    st.sigma.weights.push_back(alpha);
    double total = 0.0;
    for (double wk : st.sigma.weights) total += wk;
    if (std::abs(total - 1.0) > 1e-14) {
      for (double& wk : st.sigma.weights) wk /= total;
    }
    ++st.t;
    publish();
    st.log.push_back({st.t, measure(st.raw, mode), alpha, residual, fp.iterations});
    if (!check_bound()) return st;
  }
  st.status = MatcherStatus::kConverged;
  return st;
}

}  // namespace

MatcherState regret_match_stationary(const SmoothGame& game, const FieldFamily& family,
                                     const EmpiricalDistribution& sigma1,
                                     const MatcherOptions& options) {
  return run_matcher(game, family, sigma1, options, RegretMode::kStationary);
}

MatcherState regret_match_local(const SmoothGame& game, const FieldFamily& family,
                                const EmpiricalDistribution& sigma1,
                                const MatcherOptions& options) {
  std::vector<std::string> warnings;
  for (const VectorField& f : family.fields()) {
    if (check_tangential(f, game.sets(), 2000, 1).tangential) continue;
    if (!options.allow_non_tangential) {
      throw InputError("regret matching: field '" + f.name() + "' is not tangential");
    }
    warnings.push_back("field '" + f.name() + "' is not tangential; local guarantee void");
  }
  MatcherState st = run_matcher(game, family, sigma1, options, RegretMode::kLocal);
  st.warnings = std::move(warnings);
  return st;
}

}  // namespace foce
