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

#ifndef FOCE_GAMES_H_
#define FOCE_GAMES_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "foce/geometry.h"
#include "foce/normal_form.h"
#include "foce/types.h"

namespace foce {

// Own-block gradient of player i's utility.
using GradientFn = std::function<Vector(int player, const Profile& x)>;
using UtilityFn = std::function<double(int player, const Profile& x)>;

class SmoothGame {
 public:
  // G[i] bounds ||gradient(i, x)|| and L[i] its Lipschitz constant over the
  // product set.
  SmoothGame(std::string name, std::vector<ConvexSet> sets, GradientFn gradient,
             std::vector<double> G, std::vector<double> L, UtilityFn utility = {});

  const std::string& name() const { return name_; }
  int num_players() const { return static_cast<int>(sets_.size()); }
  const std::vector<ConvexSet>& sets() const { return sets_; }
  const ConvexSet& set(int player) const { return sets_[player]; }
  const std::vector<int>& dims() const { return dims_; }
  int total_dim() const;

  Vector gradient(int player, const Profile& x) const;
  Profile gradients(const Profile& x) const;
  bool has_utility() const { return static_cast<bool>(utility_); }
  double utility(int player, const Profile& x) const;

  const std::vector<double>& G() const { return G_; }
  const std::vector<double>& L() const { return L_; }
  double diameter() const { return product_diameter(sets_); }

 private:
  std::string name_;
  std::vector<ConvexSet> sets_;
  std::vector<int> dims_;
  GradientFn gradient_;
  UtilityFn utility_;
  std::vector<double> G_, L_;
};

// u1 = -x1 x2, u2 = x1 x2 on [-1, 1]^2.
SmoothGame matching_pennies();

// Two-player zero-sum bilinear game u1 = x1' M x2, u2 = -u1.
SmoothGame bilinear_game(ConvexSet X1, ConvexSet X2, Matrix M,
                         std::string name = "bilinear");

// Mixed extension of a finite game over product of simplices.
SmoothGame multilinear_extension(const NormalFormGame& game);

// Max over players and own coordinates of |fd - grad| / max(1, |grad|) using
// central differences with step h. Throws NotApplicableError when the game
// has no utility evaluator.
double finite_difference_audit(const SmoothGame& game, const Profile& x,
                               double h = 1e-5);

// Samples the product set and returns a warning per declared constant that is
// exceeded (G by gradient norms, L by gradient difference quotients).
std::vector<std::string> verify_bounds(const SmoothGame& game, int samples,
                                       std::uint64_t seed);

}  // namespace foce

#endif  // FOCE_GAMES_H_
