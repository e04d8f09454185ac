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

#include <benchmark/benchmark.h>

#include "foce/certify.h"
#include "foce/deviations.h"
#include "foce/dynamics.h"
#include "foce/games.h"
#include "foce/geometry.h"
#include "foce/lp.h"
#include "foce/normal_form.h"
#include "foce/phi_regret.h"
#include "foce/regret.h"

namespace foce {
namespace {

Vector random_point(int d, Rng& rng) {
  Vector v(d);
  for (int k = 0; k < d; ++k) v(k) = 2.0 * rng.normal();
  return v;
}

void BM_ProjectSimplex(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const ConvexSet set = ConvexSet::Simplex(d);
  Rng rng(1);
  const Vector y = random_point(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(set.project(y));
}
BENCHMARK(BM_ProjectSimplex)->Arg(4)->Arg(32)->Arg(256);

void BM_ProjectPolyhedron(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  // Cross-polytope slice: |x_k| <= 1 plus sum x <= 1.
  Matrix A(2 * d + 1, d);
  A.setZero();
  for (int k = 0; k < d; ++k) {
    A(2 * k, k) = 1;
    A(2 * k + 1, k) = -1;
  }
  A.row(2 * d).setOnes();
  const ConvexSet set = ConvexSet::Polyhedron(A, Vector::Ones(2 * d + 1));
  Rng rng(2);
  const Vector y = random_point(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(set.project(y));
}
BENCHMARK(BM_ProjectPolyhedron)->Arg(3)->Arg(10)->Arg(30);

void BM_PenniesDynamics(benchmark::State& state) {
  const SmoothGame game = matching_pennies();
  const Profile x0{make_vector({1}), make_vector({1})};
  const int T = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_pga(game, x0, T, StepSchedule::InverseSqrt(0.5)).tau_bar());
  }
  state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_PenniesDynamics)->Arg(1000)->Arg(100000);

void BM_CurveRegrets(benchmark::State& state) {
  const SmoothGame game = matching_pennies();
  const Profile x0{make_vector({1}), make_vector({1})};
  const Trajectory traj =
      run_pga(game, x0, static_cast<int>(state.range(0)), StepSchedule::InverseSqrt(0.5));
  FieldFamily family = pull_to_point_family(game.sets());
  family.add(radial_field(game.sets()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(curve_regrets(traj, game, family, RegretMode::kStationary, 16));
  }
}
BENCHMARK(BM_CurveRegrets)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_RegretMatching(benchmark::State& state) {
  const SmoothGame game = matching_pennies();
  const FieldFamily family = extension_family_2x2();
  MatcherOptions opt;
  opt.epsilon = 1e-12;
  opt.max_iter = static_cast<int>(state.range(0));
  const auto sigma1 = EmpiricalDistribution::point_mass({make_vector({0.5}), make_vector({0.5})});
  for (auto _ : state) {
    benchmark::DoNotOptimize(regret_match_stationary(game, family, sigma1, opt).t);
  }
}
BENCHMARK(BM_RegretMatching)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_PenniesCertificate(benchmark::State& state) {
  const SmoothGame game = matching_pennies();
  const Certificate cert = pennies_radius_certificate(100.0);
  GridSpec grid;
  grid.resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_certificate(game, cert, grid).min_margin);
}
BENCHMARK(BM_PenniesCertificate)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_WorstCaseLp(benchmark::State& state) {
  Rng rng(5);
  const int a = static_cast<int>(state.range(0));
  const NormalFormGame game = NormalFormGame::random({a, a, a}, rng);
  std::vector<double> q(game.num_profiles());
  for (double& v : q) v = rng.uniform();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        worst_case_expectation(game, q, EquilibriumKind::kCorrelated, Sense::kMinimize).value);
  }
}
BENCHMARK(BM_WorstCaseLp)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace foce

BENCHMARK_MAIN();
