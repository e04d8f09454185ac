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

#include "foce/games.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "foce/errors.h"

namespace foce {

SmoothGame::SmoothGame(std::string name, std::vector<ConvexSet> sets, GradientFn gradient,
                       std::vector<double> G, std::vector<double> L, UtilityFn utility)
    : name_(std::move(name)),
      sets_(std::move(sets)),
      gradient_(std::move(gradient)),
      utility_(std::move(utility)),
      G_(std::move(G)),
      L_(std::move(L)) {
  if (sets_.empty()) throw InputError("game: no players");
  if (!gradient_) throw InputError("game: missing gradient evaluator");
  if (G_.size() != sets_.size() || L_.size() != sets_.size()) {
    throw InputError("game: need one G and one L per player");
  }
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (!(G_[i] >= 0.0) || !(L_[i] >= 0.0) || !std::isfinite(G_[i]) || !std::isfinite(L_[i])) {
      throw InputError("game: G and L must be finite and non-negative");
    }
  }
  dims_ = set_dims(sets_);
}

int SmoothGame::total_dim() const {
  int d = 0;
  for (int k : dims_) d += k;
  return d;
}

Vector SmoothGame::gradient(int player, const Profile& x) const {
  if (player < 0 || player >= num_players()) throw InputError("gradient: bad player index");
  if (static_cast<int>(x.size()) != num_players()) {
    throw InputError("gradient: profile has wrong number of blocks");
  }
  Vector g = gradient_(player, x);
  if (g.size() != dims_[player]) throw InputError("gradient: evaluator returned wrong size");
  return g;
}

Profile SmoothGame::gradients(const Profile& x) const {
  Profile g(num_players());
  for (int i = 0; i < num_players(); ++i) g[i] = gradient(i, x);
  return g;
}

double SmoothGame::utility(int player, const Profile& x) const {
  if (!utility_) throw NotApplicableError("game '" + name_ + "' has no utility evaluator");
  return utility_(player, x);
}

SmoothGame matching_pennies() {
  ConvexSet box = ConvexSet::Box(Vector::Constant(1, -1.0), Vector::Constant(1, 1.0));
  return bilinear_game(box, box, Matrix::Constant(1, 1, -1.0), "matching_pennies");
}

SmoothGame bilinear_game(ConvexSet X1, ConvexSet X2, Matrix M, std::string name) {
  if (M.rows() != X1.dim() || M.cols() != X2.dim()) {
    throw InputError("bilinear_game: matrix shape does not match the action sets");
  }
  const double op = M.rows() && M.cols() ? Eigen::JacobiSVD<Matrix>(M).singularValues()(0) : 0.0;
  const double G1 = op * X2.max_norm();
  const double G2 = op * X1.max_norm();
  auto mat = std::make_shared<const Matrix>(std::move(M));
  GradientFn grad = [mat](int i, const Profile& x) -> Vector {
    if (i == 0) return (*mat) * x[1];
    return -(mat->transpose() * x[0]);
  };
  UtilityFn util = [mat](int i, const Profile& x) {
    const double u = x[0].dot((*mat) * x[1]);
    return i == 0 ? u : -u;
  };
  return SmoothGame(std::move(name), {std::move(X1), std::move(X2)}, std::move(grad),
                    {G1, G2}, {op, op}, std::move(util));
}

SmoothGame multilinear_extension(const NormalFormGame& game) {
  const int n = game.num_players();
  std::vector<ConvexSet> sets;
  std::vector<double> G(n), L(n);
  int max_actions = 0;
  for (int c : game.action_counts()) max_actions = std::max(max_actions, c);
  for (int i = 0; i < n; ++i) {
    const int a = game.action_counts()[i];
    sets.push_back(ConvexSet::Simplex(a));
    const double U = game.max_abs_payoff(i);
    G[i] = std::sqrt(static_cast<double>(a)) * U;
    L[i] = (n - 1) * std::sqrt(static_cast<double>(a) * max_actions) * U;
  }
  auto nf = std::make_shared<const NormalFormGame>(game);
  GradientFn grad = [nf](int i, const Profile& x) -> Vector {
    const int n = nf->num_players();
    Vector g = Vector::Zero(nf->action_counts()[i]);
    std::vector<int> a(n, 0);
    for (std::size_t f = 0; f < nf->num_profiles(); ++f) {
      double w = 1.0;
      for (int j = 0; j < n; ++j) {
        a[j] = nf->action_of(f, j);
        if (j != i) w *= x[j](a[j]);
      }
      if (w != 0.0) g(a[i]) += w * nf->payoff(i, f);
    }
    return g;
  };
  UtilityFn util = [nf](int i, const Profile& x) {
    const int n = nf->num_players();
    double u = 0.0;
    for (std::size_t f = 0; f < nf->num_profiles(); ++f) {
      double w = 1.0;
      for (int j = 0; j < n; ++j) w *= x[j](nf->action_of(f, j));
      u += w * nf->payoff(i, f);
    }
    return u;
  };
  return SmoothGame("multilinear_extension", std::move(sets), std::move(grad), std::move(G),
                    std::move(L), std::move(util));
}

double finite_difference_audit(const SmoothGame& game, const Profile& x, double h) {
  if (!game.has_utility()) {
    throw NotApplicableError("game '" + game.name() + "' is not auditable: no utility evaluator");
  }
  double worst = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const Vector g = game.gradient(i, x);
    for (int k = 0; k < game.dims()[i]; ++k) {
      Profile xp = x, xm = x;
      xp[i](k) += h;
      xm[i](k) -= h;
      const double fd = (game.utility(i, xp) - game.utility(i, xm)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g(k)) / std::max(1.0, std::abs(g(k))));
    }
  }
  return worst;
}

std::vector<std::string> verify_bounds(const SmoothGame& game, int samples, std::uint64_t seed) {
  Rng rng(seed);
  const int n = game.num_players();
  std::vector<double> g_seen(n, 0.0), l_seen(n, 0.0);
  Profile prev;
  Profile prev_grad;
  for (int s = 0; s < samples; ++s) {
    const Profile x = sample_profile(game.sets(), rng, 0.5);
    const Profile g = game.gradients(x);
    for (int i = 0; i < n; ++i) {
      g_seen[i] = std::max(g_seen[i], g[i].norm());
      if (!prev.empty()) {
        double dx = 0.0;
        for (int j = 0; j < n; ++j) dx += (x[j] - prev[j]).squaredNorm();
        dx = std::sqrt(dx);
        if (dx > 1e-12) l_seen[i] = std::max(l_seen[i], (g[i] - prev_grad[i]).norm() / dx);
      }
    }
    prev = x;
    prev_grad = g;
  }
  std::vector<std::string> warnings;
  for (int i = 0; i < n; ++i) {
    if (g_seen[i] > game.G()[i] * (1.0 + 1e-9) + 1e-12) {
      warnings.push_back("player " + std::to_string(i + 1) + ": sampled gradient norm " +
                         format_double(g_seen[i]) + " exceeds declared G " +
                         format_double(game.G()[i]));
    }
    if (l_seen[i] > game.L()[i] * (1.0 + 1e-9) + 1e-12) {
      warnings.push_back("player " + std::to_string(i + 1) + ": sampled gradient slope " +
                         format_double(l_seen[i]) + " exceeds declared L " +
                         format_double(game.L()[i]));
    }
  }
  return warnings;
}

}  // namespace foce
