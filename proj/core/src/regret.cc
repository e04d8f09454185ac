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

#include "foce/regret.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "foce/errors.h"

namespace foce {

const char* to_string(RegretMode mode) {
  return mode == RegretMode::kStationary ? "stationary" : "local";
}

const char* to_string(SetClass set_class) {
  switch (set_class) {
    case SetClass::kAcute: return "acute";
    case SetClass::kCurved: return "curved";
    case SetClass::kNoGuarantee: return "no_guarantee";
  }
  return "unknown";
}

double stationary_pairing(const SmoothGame& game, const Profile& x, const Profile& f) {
  double s = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    s += game.set(i).tangent_part(x[i], game.gradient(i, x)).dot(f[i]);
  }
  return s;
}

double local_pairing(const SmoothGame& game, const Profile& x, const Profile& f) {
  double s = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    s += game.set(i).tangent_part(x[i], f[i]).dot(game.gradient(i, x));
  }
  return s;
}

namespace {

double expectation(const EmpiricalDistribution& dist, const SmoothGame& game,
                   const VectorField& field, RegretMode mode) {
  dist.validate();
  double total = 0.0;
  for (std::size_t k = 0; k < dist.points.size(); ++k) {
    if (dist.weights[k] == 0.0) continue;
    const Profile& x = dist.points[k];
    const Profile f = field.evaluate(x);
    total += dist.weights[k] * (mode == RegretMode::kStationary ? stationary_pairing(game, x, f)
                                                                : local_pairing(game, x, f));
  }
  return total;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t mix_clipped(std::uint64_t h, const std::vector<int>& clipped) {
  h = mix(h, 0xffffULL);
  for (int j : clipped) h = mix(h, static_cast<std::uint64_t>(j) + 1);
  return h;
}

}  // namespace

double stationary_regret(const EmpiricalDistribution& dist, const SmoothGame& game,
                         const VectorField& field) {
  return expectation(dist, game, field, RegretMode::kStationary);
}

double local_regret(const EmpiricalDistribution& dist, const SmoothGame& game,
                    const VectorField& field) {
  return expectation(dist, game, field, RegretMode::kLocal);
}

std::vector<double> curve_regrets(const Trajectory& traj, const SmoothGame& game,
                                  const FieldFamily& family, RegretMode mode, int nodes) {
  if (nodes < 1) throw InputError("quadrature nodes must be >= 1");
  if (traj.sets().size() != game.sets().size()) {
    throw InputError("curve regret: trajectory and game disagree on players");
  }
  const int k = static_cast<int>(family.size());
  const int n = game.num_players();
  CurveIntegrand integrand = [&](int, const Profile& x, std::span<double> out) {
    const Profile grad = game.gradients(x);
    if (mode == RegretMode::kStationary) {
      Profile proj(n);
      for (int i = 0; i < n; ++i) proj[i] = game.set(i).tangent_part(x[i], grad[i]);
      for (int f = 0; f < k; ++f) out[f] = dot(proj, family[f].evaluate(x));
    } else {
      for (int f = 0; f < k; ++f) {
        const Profile v = family[f].evaluate(x);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += game.set(i).tangent_part(x[i], v[i]).dot(grad[i]);
        out[f] = s;
      }
    }
  };
  CurveSignature signature = [&](int, const Profile& x) {
    std::uint64_t h = 0;
    std::vector<int> clipped;
    const Profile grad = game.gradients(x);
    for (int i = 0; i < n; ++i) {
      game.set(i).tangent_part(x[i], grad[i], &clipped);
      h = mix_clipped(h, clipped);
    }
    if (mode == RegretMode::kLocal) {
      for (int f = 0; f < k; ++f) {
        const Profile v = family[f].evaluate(x);
        for (int i = 0; i < n; ++i) {
          game.set(i).tangent_part(x[i], v[i], &clipped);
          h = mix_clipped(h, clipped);
        }
      }
    }
    return h;
  };
  std::vector<double> total = integrate_curve(traj, k, integrand, nodes, signature);
  const double tb = traj.tau_bar();
  for (double& v : total) v = tb > 0.0 ? v / tb : 0.0;
  return total;
}

double curve_stationary_regret(const Trajectory& traj, const SmoothGame& game,
                               const VectorField& field, int nodes) {
  return curve_regrets(traj, game, FieldFamily({field}), RegretMode::kStationary, nodes)[0];
}

double curve_local_regret(const Trajectory& traj, const SmoothGame& game,
                          const VectorField& field, int nodes) {
  return curve_regrets(traj, game, FieldFamily({field}), RegretMode::kLocal, nodes)[0];
}

double curve_average(const Trajectory& traj, const std::function<double(const Profile&)>& q,
                     int nodes) {
  CurveIntegrand integrand = [&](int, const Profile& x, std::span<double> out) { out[0] = q(x); };
  const double total = integrate_curve(traj, 1, integrand, nodes)[0];
  return traj.tau_bar() > 0.0 ? total / traj.tau_bar() : 0.0;
}

double telescoping_sum(const Trajectory& traj, const VectorField& field) {
  double s = 0.0;
  double h_prev = field.potential(traj.iterate(0));
  for (int t = 0; t < traj.num_steps(); ++t) {
    const double h_next = field.potential(traj.iterate(t + 1));
    s += traj.mu(t) * (h_next - h_prev);
    h_prev = h_next;
  }
  return s;
}

double curve_velocity_pairing(const Trajectory& traj, const VectorField& field, int nodes) {
  for (const ConvexSet& s : traj.sets()) {
    if (s.kind() == SetKind::kBall || (s.kind() == SetKind::kPolyhedron && !s.is_acute())) {
      throw NotApplicableError("velocity pairing needs boxes, simplices or acute polyhedra");
    }
  }
  int cached_t = -1;
  Profile g;
  CurveIntegrand integrand = [&](int t, const Profile& x, std::span<double> out) {
    if (t != cached_t) {
      g = traj.cached_gradient(t);
      cached_t = t;
    }
    const Profile grad_h = field.evaluate(x);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (traj.frozen()[i]) continue;
      // mu_t * <grad h, Proj_TC(g / mu_t)> = <grad h, Proj_TC(g)>
      s += grad_h[i].dot(traj.sets()[i].tangent_part(x[i], g[i]));
    }
    out[0] = s;
  };
  return integrate_curve(traj, 1, integrand, nodes)[0];
}

SetGeometry classify_sets(const std::vector<ConvexSet>& sets) {
  SetGeometry geo;
  bool curved = false;
  for (const ConvexSet& s : sets) {
    geo.K.push_back(s.curvature());
    if (s.kind() == SetKind::kBall) {
      curved = true;
    } else if (!s.is_acute()) {
      geo.set_class = SetClass::kNoGuarantee;
    }
  }
  if (geo.set_class != SetClass::kNoGuarantee && curved) geo.set_class = SetClass::kCurved;
  geo.diameter = product_diameter(sets);
  return geo;
}

BoundInputs bound_inputs(const SmoothGame& game, const StepSchedule& schedule, int T, double G_h) {
  const SetGeometry geo = classify_sets(game.sets());
  BoundInputs in;
  in.set_class = geo.set_class;
  in.G = game.G();
  in.L = game.L();
  in.K = geo.K;
  in.G_h = G_h;
  in.diameter = geo.diameter;
  in.T = T;
  in.schedule = schedule;
  return in;
}

double poly_factor(const BoundInputs& in) {
  double sum_G = 0.0;
  for (double g : in.G) sum_G += g;
  double p = 0.0;
  for (std::size_t i = 0; i < in.G.size(); ++i) {
    const double K = in.set_class == SetClass::kAcute ? 0.0 : in.K.at(i);
    p += K * in.G[i] * in.G[i] + in.L.at(i) * sum_G;
  }
  return 1.0 + in.G_h * p;
}

std::optional<double> bound_formula(const BoundInputs& in) {
  if (in.T < 1) throw InputError("bound_formula: T must be >= 1");
  if (in.G.size() != in.L.size() || in.G.size() != in.K.size()) {
    throw InputError("bound_formula: G, L, K must have one entry per player");
  }
  if (in.set_class == SetClass::kNoGuarantee) return std::nullopt;
  in.schedule.validate(in.T);
  double tau_bar = 0.0, second = 0.0;
  for (int t = 0; t < in.T; ++t) {
    const double eta = in.schedule.eta(t);
    const double mu = in.schedule.mu(t);
    tau_bar += mu * eta;
    second += eta * eta * mu;
  }
  if (!(tau_bar > 0.0)) throw InputError("bound_formula: schedule has zero total time");
  const double mu_first = in.schedule.mu(0);
  const double mu_last = in.schedule.mu(in.T - 1);
  const double drift = poly_factor(in) - 1.0;
  return 2.0 * in.diameter * in.G_h * (mu_last + mu_first) / tau_bar +
         second / (2.0 * tau_bar) * drift;
}

bool RegretReport::all_within_bound() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const RegretEntry& e) { return e.within_bound; });
}

std::string RegretReport::serialize() const {
  std::ostringstream os;
  os << "report = regret\n";
  os << "mode = " << to_string(mode) << "\n";
  os << "estimator = " << estimator << "\n";
  os << "set_class = " << set_class << "\n";
  os << "steps = " << steps << "\n";
  os << "schedule = " << schedule << "\n";
  os << "fields = " << entries.size() << "\n";
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const RegretEntry& e = entries[k];
    const std::string p = "field." + std::to_string(k + 1) + ".";
    os << p << "id = " << e.field_id << "\n";
    os << p << "raw = " << format_double(e.raw) << "\n";
    os << p << "epsilon = " << format_double(e.epsilon) << "\n";
    os << p << "bound = " << (e.bound ? format_double(*e.bound) : std::string("none")) << "\n";
    os << p << "within_bound = " << (e.within_bound ? "true" : "false") << "\n";
    if (e.flagged) os << p << "flag = not_tangential_not_gradient\n";
  }
  os << "family_max = " << format_double(family_max) << "\n";
  os << "all_within_bound = " << (all_within_bound() ? "true" : "false") << "\n";
  return os.str();
}

namespace {

void finish_report(RegretReport& rep, const SmoothGame& game, const FieldFamily& family,
                   const std::vector<double>& raw, const BoundInputs* trajectory_bound) {
  const SetGeometry geo = classify_sets(game.sets());
  rep.set_class = to_string(geo.set_class);
  double fam = 0.0;
  bool first = true;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const VectorField& f = family[k];
    RegretEntry e;
    e.field_id = f.name();
    e.raw = raw[k];
    BoundInputs in = trajectory_bound ? *trajectory_bound
                                      : bound_inputs(game, StepSchedule::InverseSqrt(1.0), 1, 0.0);
    in.G_h = f.G();
    e.epsilon = e.raw / poly_factor(in);
    if (trajectory_bound && f.is_gradient()) {
      e.bound = bound_formula(in);
      if (e.bound) {
        const double measured = rep.mode == RegretMode::kStationary ? std::abs(e.raw) : e.raw;
        e.within_bound = measured <= *e.bound + kBoundSlack;
      }
    }
    if (rep.mode == RegretMode::kLocal && !f.is_gradient()) {
      e.flagged = !check_tangential(f, game.sets(), 2000, 0).tangential;
    }
    const double m = rep.mode == RegretMode::kStationary ? std::abs(e.raw) : e.raw;
    fam = first ? m : std::max(fam, m);
    first = false;
    rep.entries.push_back(std::move(e));
  }
  rep.family_max = fam;
}

}  // namespace

RegretReport regret_report(const Trajectory& traj, const SmoothGame& game,
                           const FieldFamily& family, RegretMode mode, int nodes) {
  RegretReport rep;
  rep.mode = mode;
  rep.estimator = "curve";
  rep.steps = traj.num_steps();
  rep.schedule = traj.schedule().describe();
  const std::vector<double> raw = curve_regrets(traj, game, family, mode, nodes);
  // The adversarial regime has its own cross term; only raw values are reported.
  const bool adversarial = std::any_of(traj.frozen().begin(), traj.frozen().end(),
                                       [](char c) { return c != 0; });
  if (traj.num_steps() >= 1 && !adversarial) {
    const BoundInputs in = bound_inputs(game, traj.schedule(), traj.num_steps(), 0.0);
    finish_report(rep, game, family, raw, &in);
  } else {
    finish_report(rep, game, family, raw, nullptr);
  }
  return rep;
}

RegretReport regret_report(const EmpiricalDistribution& dist, const SmoothGame& game,
                           const FieldFamily& family, RegretMode mode) {
  RegretReport rep;
  rep.mode = mode;
  rep.estimator = "samples";
  rep.steps = static_cast<int>(dist.points.size());
  rep.schedule = "none";
  std::vector<double> raw;
  for (const VectorField& f : family.fields()) {
    raw.push_back(mode == RegretMode::kStationary ? stationary_regret(dist, game, f)
                                                  : local_regret(dist, game, f));
  }
  finish_report(rep, game, family, raw, nullptr);
  return rep;
}

}  // namespace foce
