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

#ifndef FOCE_NORMAL_FORM_H_
#define FOCE_NORMAL_FORM_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "foce/types.h"

namespace foce {

// Finite game with payoff tensors stored row-major (last player's action
// varies fastest).
class NormalFormGame {
 public:
  NormalFormGame(std::vector<int> action_counts,
                 std::vector<std::vector<double>> payoffs);

  int num_players() const { return static_cast<int>(counts_.size()); }
  const std::vector<int>& action_counts() const { return counts_; }
  std::size_t num_profiles() const { return num_profiles_; }

  std::size_t flat_index(std::span<const int> actions) const;
  std::vector<int> actions_of(std::size_t flat) const;
  int action_of(std::size_t flat, int player) const;
  // Same profile with `player`'s action replaced.
  std::size_t with_action(std::size_t flat, int player, int action) const;

  double payoff(int player, std::size_t flat) const { return payoffs_[player][flat]; }
  const std::vector<double>& payoffs(int player) const { return payoffs_[player]; }
  double max_abs_payoff(int player) const;

  // Key-value text: players, actions, payoff.<i> (one-based i).
  static NormalFormGame parse(std::string_view text);
  std::string serialize() const;

  // Bundled games.
  static NormalFormGame prisoners_dilemma();
  static NormalFormGame matching_pennies();
  static NormalFormGame coordination();
  static NormalFormGame battle_of_sexes();
  static NormalFormGame chicken();
  static NormalFormGame stag_hunt();
  static std::vector<std::pair<std::string, NormalFormGame>> bundled_2x2();
  // Payoffs uniform in [-1, 1].
  static NormalFormGame random(std::vector<int> action_counts, Rng& rng);

 private:
  std::vector<int> counts_;
  std::vector<std::size_t> strides_;
  std::size_t num_profiles_ = 0;
  std::vector<std::vector<double>> payoffs_;
};

}  // namespace foce

#endif  // FOCE_NORMAL_FORM_H_
