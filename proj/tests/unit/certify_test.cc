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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "foce/certify.h"
#include "foce/errors.h"
#include "foce/regret.h"
#include "lp_oracles.h"
#include "test_util.h"

namespace foce {
namespace {

using testing::lattice_extremes;
using testing::vertex_extremes;
using testing::welfare;

Profile pt(double a, double b) { return {make_vector({a}), make_vector({b})}; }

double h_at(const VectorField& h, double a, double b) { return h.potential(pt(a, b)); }

TEST(SetGrid, Counts) {
  EXPECT_EQ(set_grid(ConvexSet::Box(make_vector({0, 0}), make_vector({1, 2})), 5).size(), 25u);
  // Compositions of 4 into 3 parts: C(6, 2).
  const auto simplex = set_grid(ConvexSet::Simplex(3), 5);
  EXPECT_EQ(simplex.size(), 15u);
  for (const Vector& v : simplex) EXPECT_TRUE(ConvexSet::Simplex(3).contains(v, 1e-15));
  const ConvexSet ball = ConvexSet::Ball(make_vector({1, 1}), 0.5);
  const auto pts = set_grid(ball, 7);
  EXPECT_EQ(pts.size(), 49u);
  for (const Vector& v : pts) EXPECT_TRUE(ball.contains(v, 1e-12));
  EXPECT_THROW(set_grid(ball, 0), InputError);
}

TEST(CheckCertificate, ZeroFunctionWithGridMinimum) {
  const SmoothGame g = matching_pennies();
  Certificate c;
  c.h = VectorField::Affine("zero", Matrix::Zero(2, 2), Vector::Zero(2), g.sets());
  c.q = [](const Profile& x) { return std::sin(3 * x[0](0)) + x[1](0) * x[1](0); };
  const GridSpec grid{41, 0, 0};
  double gmin = 1e300;
  for (const Vector& a : set_grid(g.set(0), 41)) {
    for (const Vector& b : set_grid(g.set(1), 41)) gmin = std::min(gmin, c.q({a, b}));
  }
  c.gamma = gmin;
  const CertificateReport rep = check_certificate(g, c, grid);
  EXPECT_EQ(rep.points, 41 * 41);
  EXPECT_GE(rep.min_margin, 0.0);
  EXPECT_NEAR(rep.min_margin, 0.0, 1e-15);
  EXPECT_TRUE(rep.feasible());
}

TEST(CheckCertificate, PenniesRadiusCertificateIsFeasible) {
  const SmoothGame g = matching_pennies();
  const Certificate c = pennies_radius_certificate(100.0);
  EXPECT_NEAR(c.gamma, -(1.0 + 2.0 / 498.0), 1e-15);
  const CertificateReport rep = check_certificate(g, c, {400, 2000, 7});
  EXPECT_EQ(rep.points, 400 * 400 + 2000);
  EXPECT_GE(rep.min_margin, -1e-6) << rep.serialize();
  const std::string doc = rep.serialize();
  EXPECT_NE(doc.find("program = coarse-stationary"), std::string::npos) << doc;
  EXPECT_NE(doc.find("min_margin = "), std::string::npos);
  EXPECT_NE(doc.find("grid.resolution = 400"), std::string::npos) << doc;
}

TEST(CheckCertificate, TooSmallSlackFails) {
  const SmoothGame g = matching_pennies();
  Certificate c = pennies_radius_certificate(100.0);
  c.gamma = -1.0 + 0.05;  // claims the average radius is below 1
  EXPECT_FALSE(check_certificate(g, c, {101, 0, 0}).feasible());
}

// Prisoner's dilemma extension; h pulls each player towards defection.
TEST(CheckCertificate, DefectionCertificateNeedsLargeEnoughScale) {
  const NormalFormGame nf = NormalFormGame::prisoners_dilemma();
  const SmoothGame g = multilinear_extension(nf);
  auto make = [&](double c) {
    Certificate cert;
    const Vector eD = make_vector({0, 1});
    const Matrix I = Matrix::Identity(2, 2);
    cert.h = VectorField::GradientQuadratic("h", {c * I, c * I}, {-c * eD, -c * eD}, g.sets());
    cert.q = [eD](const Profile& x) {
      return -((x[0] - eD).squaredNorm() + (x[1] - eD).squaredNorm()) / 2.0;
    };
    cert.gamma = 0.0;
    return cert;
  };
  // Pairing is -c (p1 gain1 + p2 gain2) with gains >= 1, q = -(p1^2 + p2^2):
  // c >= 1 is enough and c = 1/4 fails at mutual cooperation.
  for (double c : {1.0, 2.0, 4.0, 8.0}) {
    EXPECT_TRUE(check_certificate(g, make(c), {31, 500, 1}).feasible()) << c;
  }
  const CertificateReport bad = check_certificate(g, make(0.25), {31, 0, 1});
  EXPECT_FALSE(bad.feasible());
  EXPECT_NEAR(bad.argmin[0](0), 1.0, 1e-12);
  EXPECT_NEAR(bad.argmin[1](0), 1.0, 1e-12);
}

TEST(PenniesLyapunov, ZeroOnUnitDisc) {
  const VectorField h = pennies_lyapunov(100.0);
  Rng rng(2);
  for (int k = 0; k < 200; ++k) {
    const double r = std::sqrt(rng.uniform()), a = rng.uniform(0, 2 * std::numbers::pi);
    const Profile x = pt(r * std::cos(a), r * std::sin(a));
    EXPECT_EQ(h.potential(x), 0.0);
    EXPECT_EQ(h.evaluate(x)[0](0), 0.0);
  }
  EXPECT_THROW(pennies_lyapunov(0.1), InputError);
}

TEST(PenniesLyapunov, GradientMatchesFiniteDifferences) {
  for (double M1 : {1.0, 100.0}) {
    const VectorField h = pennies_lyapunov(M1);
    Rng rng(4);
    int checked = 0;
    while (checked < 300) {
      const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
      // Stay away from the axes, where the angle branch switches.
      if (std::hypot(a, b) < 1.01 || std::abs(a) < 0.02 || std::abs(b) < 0.02) continue;
      ++checked;
      const double e = 1e-6;
      const double fa = (h_at(h, a + e, b) - h_at(h, a - e, b)) / (2 * e);
      const double fb = (h_at(h, a, b + e) - h_at(h, a, b - e)) / (2 * e);
      const Profile gr = h.evaluate(pt(a, b));
      const double scale = std::max(1.0, std::abs(fa) + std::abs(fb));
      EXPECT_NEAR(gr[0](0), fa, 1e-5 * scale) << a << " " << b;
      EXPECT_NEAR(gr[1](0), fb, 1e-5 * scale) << a << " " << b;
    }
  }
}

TEST(PenniesLyapunov, GradientVanishesAtUnitCircle) {
  const double M1 = 100.0, M2 = 10.0;
  const VectorField h = pennies_lyapunov(M1, M2);
  for (double u : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-8}) {
    const double r = 1.0 + u;
    const Profile gr = h.evaluate(pt(r * std::cos(0.7), r * std::sin(0.7)));
    // |phi'| <= 2 M1 u, phi <= M1 u^2 and the angle is at most pi/2.
    EXPECT_LE(std::hypot(gr[0](0), gr[1](0)), M2 * (std::numbers::pi * M1 * u + M1 * u * u));
  }
}

TEST(PenniesLyapunov, DerivativeAlongFreeFlow) {
  const double M1 = 100.0, M2 = 10.0;
  const VectorField h = pennies_lyapunov(M1, M2);
  Rng rng(6);
  int checked = 0;
  while (checked < 100) {
    const double a = rng.uniform(0.05, 1), b = rng.uniform(0.05, 1);
    const double r = std::hypot(a, b);
    if (r < 1.02) continue;
    ++checked;
    for (int sign : {1, -1}) {
      const double x1 = sign * a, x2 = sign * b;  // quadrants where x1 x2 > 0
      // Free flow of the pennies gradients is (-x2, x1).
      const double e = 1e-6;
      const double fd =
          (h_at(h, x1 - e * x2, x2 + e * x1) - h_at(h, x1 + e * x2, x2 - e * x1)) / (2 * e);
      const double expect = M1 * M2 * (r - 1) * (r - 1) / (1 + M1 * (r - 1));
      EXPECT_NEAR(fd, expect, 1e-5 * std::max(1.0, expect));
    }
  }
}

TEST(InduceActionDistribution, Examples) {
  const NormalFormGame nf = NormalFormGame::prisoners_dilemma();
  const Profile pure{make_vector({0, 1}), make_vector({1, 0})};
  const ActionDistribution a = induce_action_distribution(EmpiricalDistribution::point_mass(pure), nf);
  const std::vector<int> dc{1, 0};
  for (std::size_t f = 0; f < a.size(); ++f) EXPECT_EQ(a[f], f == nf.flat_index(dc) ? 1.0 : 0.0);

  const Profile unif{make_vector({0.5, 0.5}), make_vector({0.5, 0.5})};
  for (double p : induce_action_distribution(EmpiricalDistribution::point_mass(unif), nf)) {
    EXPECT_DOUBLE_EQ(p, 0.25);
  }
  EmpiricalDistribution mix;
  mix.points = {pure, unif};
  mix.weights = {0.3, 0.7};
  const ActionDistribution m = induce_action_distribution(mix, nf);
  for (std::size_t f = 0; f < m.size(); ++f) {
    EXPECT_NEAR(m[f], 0.3 * (f == nf.flat_index(dc)) + 0.7 * 0.25, 1e-15);
  }
}

TEST(CheckEquilibrium, Examples) {
  const NormalFormGame mp = NormalFormGame::matching_pennies();
  const EquilibriumReport u =
      check_equilibrium(mp, ActionDistribution(4, 0.25), EquilibriumKind::kCoarseCorrelated);
  EXPECT_TRUE(u.holds);
  EXPECT_NEAR(u.max_violation, 0.0, 1e-15);
  EXPECT_EQ(u.values.size(), 4u);  // 2 players x 2 deviations

  const NormalFormGame pd = NormalFormGame::prisoners_dilemma();
  ActionDistribution dd(4, 0.0), cc(4, 0.0);
  dd[pd.flat_index(std::vector<int>{1, 1})] = 1.0;
  cc[pd.flat_index(std::vector<int>{0, 0})] = 1.0;
  EXPECT_TRUE(check_equilibrium(pd, dd, EquilibriumKind::kCorrelated).holds);
  const EquilibriumReport bad = check_equilibrium(pd, cc, EquilibriumKind::kCorrelated);
  EXPECT_FALSE(bad.holds);
  EXPECT_DOUBLE_EQ(bad.max_violation, 5.0 - 3.0);
  EXPECT_FALSE(bad.worst_constraint.empty());
  EXPECT_THROW(check_equilibrium(pd, cc, EquilibriumKind::kAverageCoarseCorrelated), InputError);
  const std::vector<int> star{1, 1};
  EXPECT_TRUE(check_equilibrium(pd, dd, EquilibriumKind::kAverageCoarseCorrelated, 1e-9, star).holds);
}

// Gain of switching player i from `from` (or from anything, if from < 0)
// to `to`, summed against sigma'.
double direct_gain(const NormalFormGame& nf, const ActionDistribution& s, int i, int from, int to) {
  double v = 0.0;
  for (std::size_t f = 0; f < nf.num_profiles(); ++f) {
    if (from >= 0 && nf.action_of(f, i) != from) continue;
    v += s[f] * (nf.payoff(i, nf.with_action(f, i, to)) - nf.payoff(i, f));
  }
  return v;
}

EmpiricalDistribution random_mixed(const SmoothGame& g, Rng& rng, int atoms) {
  EmpiricalDistribution d;
  double total = 0.0;
  for (int k = 0; k < atoms; ++k) {
    d.points.push_back(sample_profile(g.sets(), rng, k % 3 == 0));
    d.weights.push_back(rng.uniform(0.1, 1.0));
    total += d.weights.back();
  }
  for (double& w : d.weights) w /= total;
  return d;
}

TEST(Equivalence, ConstraintsEqualLocalRegrets) {
  Rng rng(17);
  for (const std::vector<int>& counts : {std::vector<int>{2, 2}, {3, 2}, {2, 2, 2}}) {
    const NormalFormGame nf = NormalFormGame::random(counts, rng);
    const SmoothGame g = multilinear_extension(nf);
    const FieldFamily pulls = pull_to_point_family(g.sets());
    const FieldFamily swaps = ce_field_family(nf);
    for (int trial = 0; trial < 5; ++trial) {
      const EmpiricalDistribution d = random_mixed(g, rng, 4);
      const ActionDistribution s = induce_action_distribution(d, nf);
      const Profile probe = sample_profile(g.sets(), rng, false);
      for (const VectorField& f : pulls.fields()) {
        const Profile v = f.evaluate(probe);
        for (int i = 0; i < nf.num_players(); ++i) {
          if (v[i].norm() == 0.0) continue;
          int to = 0;
          (v[i] + probe[i]).maxCoeff(&to);
          EXPECT_NEAR(local_regret(d, g, f), direct_gain(nf, s, i, -1, to), 1e-9) << f.name();
        }
      }
      for (const VectorField& f : swaps.fields()) {
        const Profile v = f.evaluate(probe);
        for (int i = 0; i < nf.num_players(); ++i) {
          if (v[i].norm() == 0.0) continue;
          int from = 0, to = 0;
          v[i].minCoeff(&from);
          v[i].maxCoeff(&to);
          EXPECT_NEAR(local_regret(d, g, f), direct_gain(nf, s, i, from, to), 1e-9) << f.name();
        }
      }
      std::vector<int> star;
      for (int c : counts) star.push_back(rng.uniform_int(c));
      double agg = 0.0;
      for (int i = 0; i < nf.num_players(); ++i) agg += direct_gain(nf, s, i, -1, star[i]);
      EXPECT_NEAR(local_regret(d, g, aggregated_pull_field(nf, star)), agg, 1e-9);
      const EquilibriumReport rep =
          check_equilibrium(nf, s, EquilibriumKind::kAverageCoarseCorrelated, 1e-9, star);
      ASSERT_EQ(rep.values.size(), 1u);
      EXPECT_NEAR(rep.values[0], agg, 1e-12);
    }
  }
}

TEST(CheckEquilibrium, ConstraintValuesMatchDirectSums) {
  Rng rng(23);
  const NormalFormGame nf = NormalFormGame::random({3, 2, 2}, rng);
  ActionDistribution s(nf.num_profiles());
  double total = 0.0;
  for (double& p : s) total += (p = rng.uniform());
  for (double& p : s) p /= total;
  double worst = -1e300;
  for (int i = 0; i < nf.num_players(); ++i) {
    for (int to = 0; to < nf.action_counts()[i]; ++to) {
      worst = std::max(worst, direct_gain(nf, s, i, -1, to));
    }
  }
  EXPECT_NEAR(check_equilibrium(nf, s, EquilibriumKind::kCoarseCorrelated).max_violation, worst,
              1e-12);
  worst = -1e300;
  for (int i = 0; i < nf.num_players(); ++i) {
    for (int a = 0; a < nf.action_counts()[i]; ++a) {
      for (int b = 0; b < nf.action_counts()[i]; ++b) {
        if (a != b) worst = std::max(worst, direct_gain(nf, s, i, a, b));
      }
    }
  }
  EXPECT_NEAR(check_equilibrium(nf, s, EquilibriumKind::kCorrelated).max_violation, worst, 1e-12);
}

TEST(WorstCaseExpectation, PrisonersDilemmaHasOneCoarseEquilibrium) {
  const NormalFormGame pd = NormalFormGame::prisoners_dilemma();
  const std::vector<double> q = welfare(pd);
  const double at_dd = q[pd.flat_index(std::vector<int>{1, 1})];
  for (EquilibriumKind kind : {EquilibriumKind::kCoarseCorrelated, EquilibriumKind::kCorrelated}) {
    for (Sense sense : {Sense::kMinimize, Sense::kMaximize}) {
      const WorstCaseResult r = worst_case_expectation(pd, q, kind, sense);
      EXPECT_NEAR(r.value, at_dd, 1e-9);
      EXPECT_LE(r.complementary_slackness, 1e-8);
      EXPECT_TRUE(check_equilibrium(pd, r.sigma, kind, 1e-9).holds);
    }
  }
}

TEST(WorstCaseExpectation, TrivialCases) {
  const NormalFormGame flat({2, 3}, {std::vector<double>(6, 1.0), std::vector<double>(6, 2.0)});
  const std::vector<double> q{3, -1, 4, 1, -5, 9};
  EXPECT_NEAR(worst_case_expectation(flat, q, EquilibriumKind::kCorrelated, Sense::kMinimize).value,
              -5.0, 1e-9);
  EXPECT_NEAR(worst_case_expectation(flat, q, EquilibriumKind::kCorrelated, Sense::kMaximize).value,
              9.0, 1e-9);
  Rng rng(1);
  const NormalFormGame nf = NormalFormGame::random({3, 3}, rng);
  const std::vector<double> ones(9, 1.0);
  EXPECT_NEAR(
      worst_case_expectation(nf, ones, EquilibriumKind::kCoarseCorrelated, Sense::kMaximize).value,
      1.0, 1e-12);
}

TEST(WorstCaseExpectation, AgreesWithVertexAndLatticeSearchOnBundledGames) {
  const int N = 50;
  for (const auto& [name, nf] : NormalFormGame::bundled_2x2()) {
    const std::vector<double> q = welfare(nf);
    double umax = 0.0, qmax = 0.0;
    for (int i = 0; i < 2; ++i) umax = std::max(umax, nf.max_abs_payoff(i));
    for (double v : q) qmax = std::max(qmax, std::abs(v));
    // Rounding a distribution to the lattice moves it at most 4/N in l1.
    const double move = 4.0 / N;
    for (EquilibriumKind kind : {EquilibriumKind::kCoarseCorrelated, EquilibriumKind::kCorrelated}) {
      const double vmin = worst_case_expectation(nf, q, kind, Sense::kMinimize).value;
      const double vmax = worst_case_expectation(nf, q, kind, Sense::kMaximize).value;
      const auto [vlo, vhi] = vertex_extremes(nf, q, kind);
      EXPECT_NEAR(vmin, vlo, 1e-9) << name << " " << to_string(kind);
      EXPECT_NEAR(vmax, vhi, 1e-9) << name << " " << to_string(kind);
      // The rounded optimum violates each row by at most 2 umax * move.
      const auto [rlo, rhi] = lattice_extremes(nf, q, kind, N, 2.0 * umax * move);
      EXPECT_LE(rlo, vmin + qmax * move) << name;
      EXPECT_GE(rhi, vmax - qmax * move) << name;
      // Exactly feasible lattice points never beat the LP.
      const auto [elo, ehi] = lattice_extremes(nf, q, kind, N, 1e-12);
      if (elo <= ehi) {
        EXPECT_LE(vmin, elo + 1e-9) << name;
        EXPECT_GE(vmax, ehi - 1e-9) << name;
      }
    }
  }
}

TEST(Smoothness, Examples) {
  const NormalFormGame constant({2, 2}, {std::vector<double>(4, 2.0), std::vector<double>(4, 3.0)});
  const SmoothnessReport r = check_smoothness(constant, {1.0, 0.0, {}});
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.worst_slack, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(poa_bound({0.5, 0.5, {}}), 1.0);
  EXPECT_DOUBLE_EQ(poa_bound({1.0, 0.0, {}}), 1.0);
  EXPECT_DOUBLE_EQ(poa_bound({2.0, 0.5, {}}), 4.0);
  EXPECT_THROW(poa_bound({1.0, 1.0, {}}), InputError);
  EXPECT_THROW(check_smoothness(constant, {1.0, 1.5, {}}), InputError);
  const NormalFormGame negative({2, 2}, {{1, -1, 1, 1}, {1, 1, 1, 1}});
  EXPECT_THROW(check_smoothness(negative, {1.0, 0.0, {}}), InputError);
}

TEST(Smoothness, TightLambdaForRandomCosts) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    NormalFormGame nf = NormalFormGame::random({2, 3}, rng);
    std::vector<std::vector<double>> c(2, std::vector<double>(6));
    for (auto& p : c)
      for (double& v : p) v = rng.uniform(0.5, 3.0);
    const NormalFormGame costs({2, 3}, c);
    // With mu = 0 the smallest lambda is max_a sum_i C_i(a*_i, a_-i) / C(a*).
    std::size_t star = 0;
    auto social = [&](std::size_t f) { return c[0][f] + c[1][f]; };
    for (std::size_t f = 1; f < 6; ++f)
      if (social(f) < social(star)) star = f;
    double need = 0.0;
    for (std::size_t f = 0; f < 6; ++f) {
      double lhs = 0.0;
      for (int i = 0; i < 2; ++i)
        lhs += c[i][costs.with_action(f, i, costs.action_of(star, i))];
      need = std::max(need, lhs / social(star));
    }
    EXPECT_TRUE(check_smoothness(costs, {need + 1e-9, 0.0, {}}).holds);
    EXPECT_FALSE(check_smoothness(costs, {need - 1e-3, 0.0, {}}).holds);
  }
}

}  // namespace
}  // namespace foce
