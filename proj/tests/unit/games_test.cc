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

#include "foce/errors.h"
#include "foce/games.h"
#include "foce/normal_form.h"
#include "test_util.h"

namespace foce {
namespace {

Profile pt(double a, double b) { return {make_vector({a}), make_vector({b})}; }

TEST(MatchingPennies, GradientsAndBounds) {
  const SmoothGame g = matching_pennies();
  EXPECT_EQ(g.num_players(), 2);
  EXPECT_DOUBLE_EQ(g.gradient(0, pt(0.5, 0.25))(0), -0.25);
  EXPECT_DOUBLE_EQ(g.gradient(1, pt(0.5, 0.25))(0), 0.5);
  EXPECT_EQ(g.gradient(0, pt(0, 0))(0), 0.0);
  EXPECT_EQ(g.gradient(1, pt(0, 0))(0), 0.0);
  EXPECT_EQ(g.G(), (std::vector<double>{1, 1}));
  EXPECT_EQ(g.L(), (std::vector<double>{1, 1}));
  EXPECT_DOUBLE_EQ(g.utility(0, pt(0.5, 0.25)), -0.125);
}

TEST(MatchingPennies, AuditIsExact) {
  const SmoothGame g = matching_pennies();
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    EXPECT_LE(finite_difference_audit(g, pt(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9))), 1e-8);
  }
}

// Brute-force gradient of the mixed extension: sum over opponents' pure
// profiles of their probabilities times the payoff.
Vector brute_gradient(const NormalFormGame& nf, int i, const Profile& x) {
  Vector g = Vector::Zero(nf.action_counts()[i]);
  for (std::size_t f = 0; f < nf.num_profiles(); ++f) {
    const std::vector<int> a = nf.actions_of(f);
    double p = 1.0;
    for (int j = 0; j < nf.num_players(); ++j) {
      if (j != i) p *= x[j](a[j]);
    }
    g(a[i]) += p * nf.payoff(i, f);
  }
  return g;
}

TEST(MultilinearExtension, PureAndUniformExamples) {
  const NormalFormGame nf = NormalFormGame::battle_of_sexes();
  const SmoothGame g = multilinear_extension(nf);
  const Profile pure{make_vector({1, 0}), make_vector({1, 0})};
  const Vector g1 = g.gradient(0, pure);
  const int a11 = int(nf.flat_index(std::vector<int>{0, 0}));
  const int a21 = int(nf.flat_index(std::vector<int>{1, 0}));
  EXPECT_DOUBLE_EQ(g1(0), nf.payoff(0, a11));
  EXPECT_DOUBLE_EQ(g1(1), nf.payoff(0, a21));
  const Profile unif{make_vector({0.3, 0.7}), make_vector({0.5, 0.5})};
  const Vector gu = g.gradient(0, unif);
  for (int a = 0; a < 2; ++a) {
    const double want = 0.5 * (nf.payoff(0, nf.flat_index(std::vector<int>{a, 0})) +
                                nf.payoff(0, nf.flat_index(std::vector<int>{a, 1})));
    EXPECT_DOUBLE_EQ(gu(a), want);
  }
}

TEST(MultilinearExtension, ZeroGameHasZeroGradient) {
  const NormalFormGame nf({2, 3}, {std::vector<double>(6, 0.0), std::vector<double>(6, 0.0)});
  const SmoothGame g = multilinear_extension(nf);
  const Profile x{make_vector({0.5, 0.5}), make_vector({0.2, 0.3, 0.5})};
  EXPECT_EQ(g.gradient(0, x).norm(), 0.0);
  EXPECT_EQ(g.gradient(1, x).norm(), 0.0);
  EXPECT_EQ(finite_difference_audit(g, x), 0.0);
}

TEST(MultilinearExtension, MatchesBruteForceAndIdentities) {
  Rng rng(17);
  for (const std::vector<int>& counts :
       {std::vector<int>{2, 2}, std::vector<int>{3, 2, 2}, std::vector<int>{2, 2, 2, 2}}) {
    const NormalFormGame nf = NormalFormGame::random(counts, rng);
    const SmoothGame g = multilinear_extension(nf);
    for (int k = 0; k < 30; ++k) {
      const Profile x = sample_profile(g.sets(), rng, 0.3);
      for (int i = 0; i < g.num_players(); ++i) {
        const Vector gi = g.gradient(i, x);
        EXPECT_LE((gi - brute_gradient(nf, i, x)).norm(), 1e-12);
        // Degree-one homogeneity in the own strategy.
        EXPECT_NEAR(g.utility(i, x), x[i].dot(gi), 1e-12);
        EXPECT_LE(gi.norm(), g.G()[i] + 1e-9);
      }
    }
  }
}

TEST(MultilinearExtension, DeclaredConstants) {
  Rng rng(2);
  const NormalFormGame nf = NormalFormGame::random({2, 3, 4}, rng);
  const SmoothGame g = multilinear_extension(nf);
  for (int i = 0; i < 3; ++i) {
    const double m = nf.max_abs_payoff(i);
    EXPECT_NEAR(g.G()[i], std::sqrt(double(nf.action_counts()[i])) * m, 1e-12);
    EXPECT_NEAR(g.L()[i], 2.0 * std::sqrt(nf.action_counts()[i] * 4.0) * m, 1e-12);
  }
  EXPECT_TRUE(verify_bounds(g, 1000, 3).empty());
}

TEST(Audit, RandomExtensions) {
  Rng rng(23);
  for (int k = 0; k < 5; ++k) {
    const SmoothGame g = multilinear_extension(NormalFormGame::random({2, 2, 2}, rng));
    const Profile x = sample_profile(g.sets(), rng, 0.0);
    EXPECT_LE(finite_difference_audit(g, x), 1e-6);
  }
}

TEST(Audit, NeedsUtility) {
  const SmoothGame g("no-utility", {ConvexSet::Box(make_vector({0}), make_vector({1}))},
                     [](int, const Profile& x) { return x[0]; }, {1}, {1});
  EXPECT_THROW(finite_difference_audit(g, {make_vector({0.5})}), NotApplicableError);
}

TEST(VerifyBounds, WarnsOnUnderstatedConstants) {
  const SmoothGame g("steep", {ConvexSet::Box(make_vector({-1}), make_vector({1}))},
                     [](int, const Profile& x) { return Vector(3.0 * x[0]); }, {0.5}, {1});
  const std::vector<std::string> w = verify_bounds(g, 200, 1);
  EXPECT_EQ(w.size(), 2u);
}

TEST(Bilinear, ConstantsFromMatrixNorm) {
  Matrix M(2, 2);
  M << 3, 0, 0, 4;
  const SmoothGame g = bilinear_game(ConvexSet::Ball(make_vector({0, 0}), 2.0),
                                     ConvexSet::Box(make_vector({-1, -1}), make_vector({1, 1})), M);
  EXPECT_NEAR(g.L()[0], 4.0, 1e-12);
  EXPECT_NEAR(g.G()[0], 4.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(g.G()[1], 4.0 * 2.0, 1e-12);
  const Profile x{make_vector({1, 1}), make_vector({0.5, -0.5})};
  EXPECT_LE(finite_difference_audit(g, x), 1e-8);
  EXPECT_TRUE(verify_bounds(g, 500, 4).empty());
}

TEST(NormalForm, SerializeRoundTrip) {
  Rng rng(6);
  const NormalFormGame g = NormalFormGame::random({2, 3}, rng);
  const NormalFormGame h = NormalFormGame::parse(g.serialize());
  EXPECT_EQ(h.action_counts(), g.action_counts());
  for (int i = 0; i < 2; ++i) EXPECT_EQ(h.payoffs(i), g.payoffs(i));
}

TEST(NormalForm, LastPlayerFastest) {
  const NormalFormGame g({2, 3}, {std::vector<double>(6, 0), std::vector<double>(6, 0)});
  EXPECT_EQ(g.flat_index(std::vector<int>{1, 2}), 5u);
  EXPECT_EQ(g.flat_index(std::vector<int>{0, 1}), 1u);
  EXPECT_EQ(g.actions_of(4), (std::vector<int>{1, 1}));
  EXPECT_EQ(g.with_action(4, 0, 0), 1u);
}

TEST(NormalForm, RejectsBadShapes) {
  EXPECT_THROW(NormalFormGame({2, 2}, {std::vector<double>(4, 0)}), InputError);
  EXPECT_THROW(NormalFormGame({2, 2}, {std::vector<double>(3, 0), std::vector<double>(4, 0)}),
               InputError);
  EXPECT_THROW(NormalFormGame::parse("players = 2\nactions = 2 2\npayoff.1 = 1 2 3 4\n"),
               InputError);
}

TEST(NormalForm, PrisonersDilemma) {
  const NormalFormGame pd = NormalFormGame::prisoners_dilemma();
  // (D, D) is the unique equilibrium: defecting is dominant.
  for (int b = 0; b < 2; ++b) {
    EXPECT_GT(pd.payoff(0, pd.flat_index(std::vector<int>{1, b})),
              pd.payoff(0, pd.flat_index(std::vector<int>{0, b})));
  }
}

}  // namespace
}  // namespace foce
