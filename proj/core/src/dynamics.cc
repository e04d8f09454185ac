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

#include "foce/dynamics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "foce/errors.h"
#include "foce/quadrature.h"

namespace foce {

const char* to_string(MuMode mode) {
  return mode == MuMode::kUnit ? "unit" : "inverse_eta";
}

StepSchedule StepSchedule::InverseSqrt(double C, MuMode mu) {
  if (!(C > 0.0) || !std::isfinite(C)) throw InputError("schedule: C must be positive");
  StepSchedule s;
  s.kind_ = Kind::kInverseSqrt;
  s.scale_ = C;
  s.mu_mode_ = mu;
  return s;
}

StepSchedule StepSchedule::Constant(double eta, MuMode mu) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InputError("schedule: eta must be positive");
  StepSchedule s;
  s.kind_ = Kind::kConstant;
  s.scale_ = eta;
  s.mu_mode_ = mu;
  return s;
}

StepSchedule StepSchedule::Custom(std::vector<double> etas, MuMode mu) {
  for (std::size_t t = 0; t < etas.size(); ++t) {
    if (!(etas[t] >= 0.0) || !std::isfinite(etas[t])) {
      throw InputError("schedule: step " + std::to_string(t) + " is negative or non-finite");
    }
    if (t > 0 && etas[t] > etas[t - 1]) {
      throw InputError("schedule: steps must be non-increasing (step " + std::to_string(t) + ")");
    }
    if (mu == MuMode::kInverseEta && etas[t] == 0.0) {
      throw InputError("schedule: zero step with inverse_eta time scaling");
    }
  }
  StepSchedule s;
  s.kind_ = Kind::kCustom;
  s.custom_ = std::move(etas);
  s.mu_mode_ = mu;
  return s;
}

double StepSchedule::eta(int t) const {
  if (t < 0) throw InputError("schedule: negative step index");
  switch (kind_) {
    case Kind::kInverseSqrt: return scale_ / std::sqrt(static_cast<double>(t) + 1.0);
    case Kind::kConstant: return scale_;
    case Kind::kCustom:
      if (t >= static_cast<int>(custom_.size())) {
        throw InputError("schedule: custom step list has no entry " + std::to_string(t));
      }
      return custom_[t];
  }
  return 0.0;
}

double StepSchedule::mu(int t) const {
  return mu_mode_ == MuMode::kUnit ? 1.0 : 1.0 / eta(t);
}

void StepSchedule::validate(int T) const {
  if (T < 1) throw InputError("schedule: T must be >= 1");
  if (kind_ == Kind::kCustom && static_cast<int>(custom_.size()) < T) {
    throw InputError("schedule: custom step list shorter than T");
  }
}

std::string StepSchedule::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kInverseSqrt: os << "inverse_sqrt C=" << format_double(scale_); break;
    case Kind::kConstant: os << "constant eta=" << format_double(scale_); break;
    case Kind::kCustom: os << "custom steps=" << custom_.size(); break;
  }
  os << " mu=" << to_string(mu_mode_);
  return os.str();
}

namespace {

void sort_unique(std::vector<double>& v, double eta) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double s : v) {
    if (out.empty() || s - out.back() > 1e-14 * std::max(1.0, eta)) out.push_back(s);
  }
  v.swap(out);
}

// Offsets in (0, eta) where s -> Proj(x + s g) changes active set.
void set_breakpoints(const ConvexSet& set, const Vector& x, const Vector& g, double eta,
                     std::vector<double>& out) {
  if (g.squaredNorm() == 0.0 || eta <= 0.0) return;
  switch (set.kind()) {
    case SetKind::kBox:
      for (int k = 0; k < set.dim(); ++k) {
        if (g(k) == 0.0) continue;
        const double bound = g(k) > 0.0 ? set.upper()(k) : set.lower()(k);
        const double s = (bound - x(k)) / g(k);
        if (s > 0.0 && s < eta) out.push_back(s);
      }
      return;
    case SetKind::kBall: {
      const Vector d = x - set.center();
      const double a = g.squaredNorm();
      const double b = 2.0 * d.dot(g);
      const double c = d.squaredNorm() - set.radius() * set.radius();
      if (c < -kActiveTol * set.radius()) {
        const double s = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
        if (s > 0.0 && s < eta) out.push_back(s);
      } else if (b < 0.0) {
        const double s = -b / a;
        if (s > 0.0 && s < eta) out.push_back(s);
      }
      return;
    }
    case SetKind::kSimplex:
    case SetKind::kPolyhedron: {
      if (set.kind() == SetKind::kSimplex || set.is_acute()) {
        // On acute sets the curve moves with the tangent part of g and the
        // active set only grows, so walk from hit to hit.
        const LinearDescription ld = *set.linear_description();
        const int m = static_cast<int>(ld.A.rows());
        double s = 0.0;
        Vector p = x;
        for (int iter = 0; iter <= m + 1; ++iter) {
          const Vector v = set.tangent_part(p, g);
          if (v.squaredNorm() == 0.0) return;
          const Vector slack = ld.b - ld.A * p;
          const Vector rate = ld.A * v;
          double step = std::numeric_limits<double>::infinity();
          for (int j = 0; j < m; ++j) {
            if (rate(j) > 1e-14 && slack(j) > kActiveTol) step = std::min(step, slack(j) / rate(j));
          }
          if (!std::isfinite(step) || s + step >= eta) return;
          s += step;
          out.push_back(s);
          p = set.project(x + s * g);
        }
        return;
      }
      // Non-acute: locate active-set changes by sampling and bisection.
      const int samples = 32;
      auto active_at = [&](double s) { return set.active_set(set.project(x + s * g)); };
      double prev_s = 0.0;
      std::vector<int> prev = active_at(0.0);
      for (int k = 1; k <= samples; ++k) {
        const double cur_s = eta * k / samples;
        std::vector<int> cur = active_at(cur_s);
        if (cur != prev) {
          double lo = prev_s, hi = cur_s;
          for (int it = 0; it < 60 && hi - lo > 1e-15 * eta; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (active_at(mid) == prev) {
              lo = mid;
            } else {
              hi = mid;
            }
          }
          const double s = 0.5 * (lo + hi);
          if (s > 0.0 && s < eta) out.push_back(s);
        }
        prev = std::move(cur);
        prev_s = cur_s;
      }
      return;
    }
  }
}

}  // namespace

class TrajectoryBuilder {
 public:
  void freeze(int player, bool frozen) { traj_.frozen_[player] = frozen; }
  void warn(std::string message) { traj_.warnings_.push_back(std::move(message)); }

  TrajectoryBuilder(const std::vector<ConvexSet>& sets, const StepSchedule& schedule, int T) {
    traj_.sets_ = sets;
    traj_.dims_ = set_dims(sets);
    traj_.offsets_.clear();
    int off = 0;
    for (int d : traj_.dims_) {
      traj_.offsets_.push_back(off);
      off += d;
    }
    traj_.total_dim_ = off;
    traj_.schedule_ = schedule;
    traj_.frozen_.assign(sets.size(), 0);
    traj_.x_.reserve(static_cast<std::size_t>(T + 1) * off);
    traj_.g_.reserve(static_cast<std::size_t>(T) * off);
    traj_.tau_.push_back(0.0);
    traj_.bp_offset_.push_back(0);
  }

  Trajectory& traj() { return traj_; }

  void push_point(const Profile& x) {
    for (const Vector& b : x) traj_.x_.insert(traj_.x_.end(), b.data(), b.data() + b.size());
  }

  void push_segment(const Profile& x, const Profile& g, double eta, double mu) {
    for (const Vector& b : g) traj_.g_.insert(traj_.g_.end(), b.data(), b.data() + b.size());
    traj_.eta_.push_back(eta);
    traj_.mu_.push_back(mu);
    traj_.tau_.push_back(traj_.tau_.back() + mu * eta);
    std::vector<double> bps;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (traj_.frozen_[i]) continue;
      set_breakpoints(traj_.sets_[i], x[i], g[i], eta, bps);
    }
    sort_unique(bps, eta);
    traj_.bp_.insert(traj_.bp_.end(), bps.begin(), bps.end());
    traj_.bp_offset_.push_back(traj_.bp_.size());
  }

 private:
  Trajectory traj_;
};

Profile Trajectory::iterate(int t) const {
  if (t < 0 || t > num_steps()) throw InputError("iterate: index out of range");
  Profile x(dims_.size());
  const double* base = x_.data() + static_cast<std::size_t>(t) * total_dim_;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    x[i] = Eigen::Map<const Vector>(base + offsets_[i], dims_[i]);
  }
  return x;
}

Profile Trajectory::cached_gradient(int t) const {
  if (t < 0 || t >= num_steps()) throw InputError("cached_gradient: index out of range");
  Profile g(dims_.size());
  const double* base = g_.data() + static_cast<std::size_t>(t) * total_dim_;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    g[i] = Eigen::Map<const Vector>(base + offsets_[i], dims_[i]);
  }
  return g;
}

std::span<const double> Trajectory::breakpoints(int t) const {
  if (t < 0 || t >= num_steps()) throw InputError("breakpoints: index out of range");
  return std::span<const double>(bp_.data() + bp_offset_[t], bp_offset_[t + 1] - bp_offset_[t]);
}

Profile Trajectory::point(int t, double s) const {
  if (t < 0 || t >= num_steps()) throw InputError("point: segment out of range");
  const double* xb = x_.data() + static_cast<std::size_t>(t) * total_dim_;
  const double* gb = g_.data() + static_cast<std::size_t>(t) * total_dim_;
  Profile p(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    Eigen::Map<const Vector> xi(xb + offsets_[i], dims_[i]);
    if (frozen_[i] || s == 0.0) {
      p[i] = xi;
    } else {
      Eigen::Map<const Vector> gi(gb + offsets_[i], dims_[i]);
      p[i] = sets_[i].project(xi + s * gi);
    }
  }
  return p;
}

int Trajectory::segment_at(double tau) const {
  if (!(tau >= 0.0 && tau <= tau_bar())) {
    throw InputError("tau " + format_double(tau) + " outside [0, " + format_double(tau_bar()) + "]");
  }
  if (num_steps() == 0) return 0;
  auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
  int t = static_cast<int>(it - tau_.begin()) - 1;
  return std::clamp(t, 0, num_steps() - 1);
}

std::string Trajectory::to_csv() const {
  std::ostringstream os;
  os << "step,tau_start,eta,mu";
  for (int k = 0; k < total_dim_; ++k) os << ",coord_" << k;
  os << "\n";
  for (int t = 0; t <= num_steps(); ++t) {
    os << t << "," << format_double(tau_[t]) << ",";
    if (t < num_steps()) os << format_double(eta_[t]) << "," << format_double(mu_[t]);
    else os << ",";
    const double* base = x_.data() + static_cast<std::size_t>(t) * total_dim_;
    for (int k = 0; k < total_dim_; ++k) os << "," << format_double(base[k]);
    os << "\n";
  }
  return os.str();
}

Trajectory run_pga(const SmoothGame& game, const Profile& x0, int T,
                   const StepSchedule& schedule) {
  schedule.validate(T);
  if (x0.size() != game.sets().size()) throw InputError("run_pga: x0 has wrong number of blocks");
  for (int i = 0; i < game.num_players(); ++i) {
    if (x0[i].size() != game.dims()[i]) throw InputError("run_pga: x0 block has wrong size");
  }
  if (!contains(game.sets(), x0, kActiveTol)) throw InputError("run_pga: x0 is not feasible");
  TrajectoryBuilder b(game.sets(), schedule, T);
  Profile x = x0;
  b.push_point(x);
  for (int t = 0; t < T; ++t) {
    const double eta = schedule.eta(t);
    const double mu = schedule.mu(t);
    const Profile g = game.gradients(x);
    Profile next(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) next[i] = game.set(i).project(x[i] + eta * g[i]);
    b.push_segment(x, g, eta, mu);
    x = std::move(next);
    b.push_point(x);
  }
  return std::move(b.traj());
}

Trajectory run_partial_adversarial(const SmoothGame& game, const std::vector<int>& learners,
                                   const Adversary& adversary, const Profile& x0, int T,
                                   const StepSchedule& schedule) {
  if (schedule.mu_mode() != MuMode::kInverseEta) {
    throw InputError("partial adversarial runs use unit-length segments (mu = 1 / eta)");
  }
  if (!adversary && static_cast<int>(learners.size()) < game.num_players()) {
    throw InputError("partial adversarial: missing adversary");
  }
  schedule.validate(T);
  const int n = game.num_players();
  std::vector<char> learning(n, 0);
  for (int i : learners) {
    if (i < 0 || i >= n) throw InputError("partial adversarial: bad learner index");
    learning[i] = 1;
  }
  if (!contains(game.sets(), x0, kActiveTol)) throw InputError("partial adversarial: x0 infeasible");
  TrajectoryBuilder b(game.sets(), schedule, T);
  for (int i = 0; i < n; ++i) b.freeze(i, !learning[i]);
  std::vector<Profile> history{x0};
  Profile x = x0;
  b.push_point(x);
  for (int t = 0; t < T; ++t) {
    const double eta = schedule.eta(t);
    Profile g(n);
    Profile next(n);
    for (int i = 0; i < n; ++i) {
      if (learning[i]) {
        g[i] = game.gradient(i, x);
        next[i] = game.set(i).project(x[i] + eta * g[i]);
      } else {
        g[i] = Vector::Zero(game.dims()[i]);
      }
    }
    bool any_adversary = false;
    for (int i = 0; i < n; ++i) any_adversary |= !learning[i];
    if (any_adversary) {
      const Profile adv = adversary(t + 1, history);
      if (adv.size() != x.size()) throw InputError("adversary returned wrong number of blocks");
      for (int i = 0; i < n; ++i) {
        if (learning[i]) continue;
        if (adv[i].size() != game.dims()[i]) throw InputError("adversary returned wrong block size");
        if (!game.set(i).contains(adv[i], kActiveTol)) {
          b.warn("step " + std::to_string(t + 1) + ": adversary point for player " +
                 std::to_string(i + 1) + " infeasible, projected");
          next[i] = game.set(i).project(adv[i]);
        } else {
          next[i] = adv[i];
        }
      }
    }
    b.push_segment(x, g, eta, 1.0 / eta);
    x = std::move(next);
    b.push_point(x);
    history.push_back(x);
  }
  return std::move(b.traj());
}

Profile eval_curve(const Trajectory& traj, double tau) {
  const int t = traj.segment_at(tau);
  if (traj.num_steps() == 0 || tau == traj.tau_bar()) return traj.iterate(traj.num_steps());
  if (tau == traj.tau_start(t)) return traj.iterate(t);
  const double s = std::min((tau - traj.tau_start(t)) / traj.mu(t), traj.eta(t));
  return traj.point(t, s);
}

Profile velocity(const Trajectory& traj, double tau) {
  const int t = traj.segment_at(tau);
  if (traj.num_steps() == 0) throw BreakpointError("velocity: empty trajectory");
  const double t0 = traj.tau_start(t);
  const double t1 = traj.tau_start(t + 1);
  constexpr double kNear = 1e-9;
  if (tau - t0 <= kNear || t1 - tau <= kNear) {
    throw BreakpointError("velocity: tau " + format_double(tau) + " is at a segment boundary");
  }
  for (double s : traj.breakpoints(t)) {
    if (std::abs(tau - (t0 + traj.mu(t) * s)) <= kNear) {
      throw BreakpointError("velocity: tau " + format_double(tau) + " is at a curve breakpoint");
    }
  }
  const double mu = traj.mu(t);
  const double s = (tau - t0) / mu;
  const Profile x = traj.point(t, s);
  const Profile g = traj.cached_gradient(t);
  Profile v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const ConvexSet& set = traj.sets()[i];
    if (traj.frozen()[i]) {
      v[i] = Vector::Zero(x[i].size());
    } else if (set.kind() == SetKind::kBox || set.kind() == SetKind::kSimplex ||
               (set.kind() == SetKind::kPolyhedron && set.is_acute())) {
      v[i] = set.tangent_part(x[i], g[i] / mu);
    } else {
      const double h = std::min({1e-6, 0.5 * (tau - t0), 0.5 * (t1 - tau)});
      const Vector xi_plus = set.project(traj.iterate(t)[i] + ((tau + h - t0) / mu) * g[i]);
      const Vector xi_minus = set.project(traj.iterate(t)[i] + ((tau - h - t0) / mu) * g[i]);
      v[i] = (xi_plus - xi_minus) / (2.0 * h);
    }
  }
  return v;
}

void EmpiricalDistribution::validate() const {
  if (points.size() != weights.size() || points.empty()) {
    throw InputError("distribution: need one weight per point and at least one point");
  }
  // Long sums of equal weights drift by more than the tolerance in double.
  long double s = 0.0L;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InputError("distribution: negative weight");
    s += w;
  }
  if (std::abs(static_cast<double>(s) - 1.0) > 1e-12) throw InputError("distribution: weights do not sum to 1");
}

EmpiricalDistribution EmpiricalDistribution::point_mass(Profile x) {
  EmpiricalDistribution d;
  d.points.push_back(std::move(x));
  d.weights.push_back(1.0);
  return d;
}

EmpiricalDistribution sample_uniform(const Trajectory& traj, int n, std::uint64_t seed) {
  if (n < 1) throw InputError("sample_uniform: n must be positive");
  Rng rng(seed);
  std::vector<double> taus(n);
  for (double& tau : taus) tau = rng.uniform() * traj.tau_bar();
  return distribution_at(traj, taus);
}

EmpiricalDistribution distribution_at(const Trajectory& traj, std::span<const double> taus) {
  EmpiricalDistribution d;
  for (double tau : taus) d.points.push_back(eval_curve(traj, tau));
  d.weights.assign(taus.size(), taus.empty() ? 0.0 : 1.0 / static_cast<double>(taus.size()));
  return d;
}

std::vector<double> integrate_curve(const Trajectory& traj, int outputs,
                                    const CurveIntegrand& integrand, int nodes,
                                    const CurveSignature& signature) {
  if (nodes < 1) throw InputError("integrate_curve: need at least one quadrature node");
  bool all_polyhedral = true;
  for (std::size_t i = 0; i < traj.sets().size(); ++i) {
    if (!traj.frozen()[i] && !traj.sets()[i].is_polyhedral()) all_polyhedral = false;
  }
  const QuadratureRule& rule = all_polyhedral ? gauss_legendre(nodes) : midpoint_rule(nodes);
  std::vector<double> total(outputs, 0.0);
  std::vector<double> buf(outputs, 0.0);
  std::vector<double> cuts;
  for (int t = 0; t < traj.num_steps(); ++t) {
    const double eta = traj.eta(t);
    if (eta <= 0.0) continue;
    const double mu = traj.mu(t);
    cuts.clear();
    cuts.push_back(0.0);
    for (double s : traj.breakpoints(t)) cuts.push_back(s);
    cuts.push_back(eta);
    if (signature) {
      std::vector<double> refined{0.0};
      for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double a = cuts[p], b = cuts[p + 1];
        const int probes = nodes + 1;
        double prev_s = a + (b - a) * 0.5 / probes;
        std::uint64_t prev = signature(t, traj.point(t, prev_s));
        for (int k = 1; k < probes; ++k) {
          const double cur_s = a + (b - a) * (k + 0.5) / probes;
          const std::uint64_t cur = signature(t, traj.point(t, cur_s));
          if (cur != prev) {
            double lo = prev_s, hi = cur_s;
            for (int it = 0; it < 60 && hi - lo > 1e-15 * std::max(1.0, b); ++it) {
              const double mid = 0.5 * (lo + hi);
              if (signature(t, traj.point(t, mid)) == prev) {
                lo = mid;
              } else {
                hi = mid;
              }
            }
            refined.push_back(0.5 * (lo + hi));
          }
          prev = cur;
          prev_s = cur_s;
        }
        refined.push_back(b);
      }
      cuts.swap(refined);
    }
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      const double a = cuts[p], b = cuts[p + 1];
      const double len = b - a;
      if (len <= 0.0) continue;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        std::fill(buf.begin(), buf.end(), 0.0);
        integrand(t, traj.point(t, a + len * rule.nodes[k]), buf);
        const double w = rule.weights[k] * len * mu;
        for (int o = 0; o < outputs; ++o) total[o] += w * buf[o];
      }
    }
  }
  return total;
}

}  // namespace foce
