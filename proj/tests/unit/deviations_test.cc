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

#include <cmath>

#include <gtest/gtest.h>

#include "foce/deviations.h"
#include "foce/errors.h"
#include "foce/games.h"
#include "foce/normal_form.h"
#include "test_util.h"

namespace foce {
namespace {

Profile pt(double a, double b) { return {make_vector({a}), make_vector({b})}; }

const VectorField& by_name(const FieldFamily& fam, const std::string& name) {
  for (const VectorField& f : fam.fields()) {
    if (f.name() == name) return f;
  }
  throw std::runtime_error("no field " + name);
}

std::vector<ConvexSet> square_sets() {
  const ConvexSet b = ConvexSet::Box(make_vector({-1}), make_vector({1}));
  return {b, b};
}

TEST(ExtensionFamily, Examples) {
  const FieldFamily fam = extension_family_2x2();
  ASSERT_EQ(fam.size(), 8u);
  Profile v = by_name(fam, "f1+").evaluate(pt(0.5, 0.3));
  EXPECT_DOUBLE_EQ(v[0](0), 0.5);
  EXPECT_DOUBLE_EQ(v[1](0), 0.0);
  v = by_name(fam, "g1-").evaluate(pt(0.5, 0.3));
  EXPECT_DOUBLE_EQ(v[0](0), -0.8);
  EXPECT_DOUBLE_EQ(v[1](0), 0.0);
  v = by_name(fam, "g2+").evaluate(pt(0.4, -0.2));
  EXPECT_DOUBLE_EQ(v[0](0), 0.0);
  EXPECT_NEAR(v[1](0), 0.6, 1e-15);
  EXPECT_DOUBLE_EQ(by_name(fam, "f1-").evaluate(pt(-1, 0.3))[0](0), 0.0);
  for (const VectorField& f : fam.fields()) EXPECT_DOUBLE_EQ(f.G(), 2.0) << f.name();
  EXPECT_FALSE(fam.coarse());
}

TEST(ExtensionFamily, RotationalPairingIsRadius) {
  const FieldFamily fam = extension_family_2x2();
  const SmoothGame g = matching_pennies();
  const Profile x = pt(0.6, 0.8);
  const Profile a = by_name(fam, "g1-").evaluate(x), b = by_name(fam, "g2+").evaluate(x);
  const Profile grad = g.gradients(x);
  const double pairing = (a[0] + b[0]).dot(grad[0]) + (a[1] + b[1]).dot(grad[1]);
  EXPECT_NEAR(pairing, 1.0, 1e-15);
}

TEST(ExtensionFamily, SpansAffineFieldsAndIsTangential) {
  const FieldFamily fam = extension_family_2x2();
  Matrix basis(6, 8);
  for (std::size_t k = 0; k < 8; ++k) {
    const AffineMap m = *fam[k].affine();
    basis.col(k) << m.P(0, 0), m.P(0, 1), m.P(1, 0), m.P(1, 1), m.q(0), m.q(1);
  }
  Eigen::FullPivLU<Matrix> lu(basis);
  EXPECT_EQ(lu.rank(), 6);
  for (const VectorField& f : fam.fields()) {
    EXPECT_TRUE(check_tangential(f, square_sets(), 5000, 1).tangential) << f.name();
  }
}

TEST(PullToPoint, SimplexExamples) {
  const SmoothGame g = multilinear_extension(NormalFormGame::coordination());
  const FieldFamily fam = pull_to_point_family(g.sets());
  EXPECT_EQ(fam.size(), 4u);
  EXPECT_TRUE(fam.coarse());
  const Profile x{make_vector({1, 0}), make_vector({0.5, 0.5})};
  EXPECT_EQ(fam[0].evaluate(x)[0].norm(), 0.0);
  const SmoothGame g3 = multilinear_extension(NormalFormGame({3, 2}, {std::vector<double>(6, 1.0), std::vector<double>(6, 1.0)}));
  const FieldFamily f3 = pull_to_point_family(g3.sets());
  const Profile bary{Vector::Constant(3, 1.0 / 3), make_vector({0.5, 0.5})};
  const Vector b = f3[0].evaluate(bary)[0];
  EXPECT_NEAR(b(0), 2.0 / 3, 1e-15);
  EXPECT_NEAR(b(1), -1.0 / 3, 1e-15);
  EXPECT_EQ(f3[0].evaluate(bary)[1].norm(), 0.0);
  for (const VectorField& f : f3.fields()) EXPECT_NEAR(f.G(), std::sqrt(2.0), 1e-15);
}

TEST(PullToPoint, BoxVerticesAndPotential) {
  const FieldFamily fam = pull_to_point_family(square_sets());
  ASSERT_EQ(fam.size(), 4u);
  Rng rng(3);
  for (const VectorField& f : fam.fields()) {
    EXPECT_TRUE(f.is_gradient());
    EXPECT_DOUBLE_EQ(f.G(), 2.0);
    // Finite-difference gradient of the potential.
    const Profile x = pt(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Profile v = f.evaluate(x);
    for (int i = 0; i < 2; ++i) {
      Profile p = x, m = x;
      p[i](0) += 1e-6;
      m[i](0) -= 1e-6;
      EXPECT_NEAR((f.potential(p) - f.potential(m)) / 2e-6, v[i](0), 1e-6);
    }
  }
}

TEST(PullToPoint, RejectsBall) {
  EXPECT_THROW(pull_to_point_family({ConvexSet::Ball(make_vector({0}), 1.0)}), InputError);
}

TEST(CeFamily, Examples) {
  const NormalFormGame nf = NormalFormGame::stag_hunt();
  const FieldFamily fam = ce_field_family(nf);
  ASSERT_EQ(fam.size(), 4u);
  EXPECT_FALSE(fam.coarse());
  const Profile x{make_vector({0.3, 0.7}), make_vector({0.5, 0.5})};
  const Vector b = by_name(fam, "swap.p1.a1->a2").evaluate(x)[0];
  EXPECT_NEAR(b(0), -0.3, 1e-15);
  EXPECT_NEAR(b(1), 0.3, 1e-15);
  const Profile e2{make_vector({0, 1}), make_vector({0.5, 0.5})};
  EXPECT_EQ(by_name(fam, "swap.p1.a1->a2").evaluate(e2)[0].norm(), 0.0);
  const SmoothGame g = multilinear_extension(nf);
  for (const VectorField& f : fam.fields()) {
    EXPECT_TRUE(check_tangential(f, g.sets(), 3000, 2).tangential) << f.name();
  }
}

TEST(Tangential, OutwardConstantIsNot) {
  const VectorField out = VectorField::Affine("out", Matrix::Zero(2, 2), make_vector({1, 0}),
                                              square_sets());
  const TangentialReport r = check_tangential(out, square_sets(), 1000, 4);
  EXPECT_FALSE(r.tangential);
  EXPECT_NEAR(r.worst_normal, 1.0, 1e-12);
}

TEST(Combine, Examples) {
  const FieldFamily fam = extension_family_2x2();
  std::vector<double> w(8, 0.0);
  const Profile x = pt(0.3, -0.6);
  EXPECT_EQ(squared_norm(combine(fam, w, true).evaluate(x)), 0.0);
  w[4] = 1.0;
  const Profile one = combine(fam, w, true).evaluate(x);
  const Profile member = fam[4].evaluate(x);
  EXPECT_EQ(one[0], member[0]);
  EXPECT_EQ(one[1], member[1]);
  w.assign(8, 0.0);
  w[5] = w[6] = 1.0;  // g1- + g2+
  const Profile s = combine(fam, w, true).evaluate(x);
  EXPECT_NEAR(s[0](0), -0.3 + 0.6, 1e-15);
  EXPECT_NEAR(s[1](0), 0.3 + 0.6, 1e-15);
  w[0] = -1.0;
  EXPECT_THROW(combine(fam, w, true), InputError);
  EXPECT_NO_THROW(combine(fam, w, false));
}

TEST(Combine, LinearAndBounded) {
  const FieldFamily fam = extension_family_2x2();
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(8), b(8), ab(8);
    for (int k = 0; k < 8; ++k) {
      a[k] = rng.normal();
      b[k] = rng.normal();
      ab[k] = a[k] + b[k];
    }
    const Profile x = pt(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Profile fa = combine(fam, a, false).evaluate(x), fb = combine(fam, b, false).evaluate(x);
    const VectorField cab = combine(fam, ab, false);
    const Profile fab = cab.evaluate(x);
    for (int i = 0; i < 2; ++i) EXPECT_LE((fab[i] - fa[i] - fb[i]).norm(), 1e-12);
    double G = 0;
    for (int k = 0; k < 8; ++k) G += std::abs(ab[k]) * fam[k].G();
    EXPECT_NEAR(cab.G(), G, 1e-12);
    EXPECT_LE(std::sqrt(squared_norm(fab)), cab.G() + 1e-9);
  }
}

TEST(Combine, TangentPartCommutesForTangentialFamilies) {
  const FieldFamily fam = extension_family_2x2();
  const std::vector<ConvexSet> sets = square_sets();
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(8);
    for (double& v : w) v = rng.uniform();
    const Profile x = sample_profile(sets, rng, 0.75);
    const Profile lhs = tangent_part(sets, x, combine(fam, w, true).evaluate(x));
    Profile rhs = zeros_like(std::vector<int>{1, 1});
    for (int k = 0; k < 8; ++k) {
      const Profile t = tangent_part(sets, x, fam[k].evaluate(x));
      for (int i = 0; i < 2; ++i) rhs[i] += w[k] * t[i];
    }
    for (int i = 0; i < 2; ++i) EXPECT_LE((lhs[i] - rhs[i]).norm(), 1e-12);
  }
}

TEST(Combine, GradientMembersKeepPotential) {
  const FieldFamily fam = pull_to_point_family(square_sets());
  const std::vector<double> w{0.5, 0.25, 1.0, 0.0};
  const VectorField c = combine(fam, w, true);
  EXPECT_TRUE(c.is_gradient());
  const Profile x = pt(0.2, -0.4);
  double want = 0;
  for (int k = 0; k < 4; ++k) want += w[k] * fam[k].potential(x);
  EXPECT_NEAR(c.potential(x), want, 1e-12);
}

TEST(GradientQuadratic, RequiresSymmetric) {
  Matrix Q(2, 2);
  Q << 1, 2, 0, 1;
  const std::vector<ConvexSet> sets{ConvexSet::Box(make_vector({-1, -1}), make_vector({1, 1}))};
  EXPECT_THROW(VectorField::GradientQuadratic("q", {Q}, {make_vector({0, 0})}, sets), InputError);
}

TEST(Affine, SymmetricIsGradientAndBoundHolds) {
  Rng rng(12);
  const std::vector<ConvexSet> sets = square_sets();
  for (int trial = 0; trial < 20; ++trial) {
    Matrix P = Matrix::NullaryExpr(2, 2, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
    const VectorField f = VectorField::Affine("a", P, make_vector({rng.normal(), rng.normal()}), sets);
    const VectorField s = VectorField::Affine("s", P + P.transpose(), make_vector({0, 0}), sets);
    EXPECT_FALSE(f.is_gradient());
    EXPECT_TRUE(s.is_gradient());
    for (int k = 0; k < 100; ++k) {
      const Profile x = sample_profile(sets, rng, 0.5);
      EXPECT_LE(std::sqrt(squared_norm(f.evaluate(x))), f.G() + 1e-9);
    }
  }
}

TEST(Support, ZeroBlocksOutsideSupport) {
  const FieldFamily fam = extension_family_2x2();
  EXPECT_EQ(by_name(fam, "f1+").support(), (std::vector<char>{1, 0}));
  EXPECT_EQ(by_name(fam, "g2-").support(), (std::vector<char>{0, 1}));
}

TEST(AggregatedPull, PullsEveryPlayer) {
  const NormalFormGame nf = NormalFormGame::prisoners_dilemma();
  const std::vector<int> a{1, 1};
  const VectorField f = aggregated_pull_field(nf, a);
  const Profile x{make_vector({0.5, 0.5}), make_vector({1, 0})};
  const Profile v = f.evaluate(x);
  EXPECT_NEAR(v[0](0), -0.5, 1e-15);
  EXPECT_NEAR(v[0](1), 0.5, 1e-15);
  EXPECT_NEAR(v[1](0), -1.0, 1e-15);
  EXPECT_NEAR(v[1](1), 1.0, 1e-15);
}

}  // namespace
}  // namespace foce
