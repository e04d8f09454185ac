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

#include "foce/normal_form.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "foce/errors.h"
#include "foce/key_value.h"

namespace foce {

NormalFormGame::NormalFormGame(std::vector<int> action_counts,
                               std::vector<std::vector<double>> payoffs)
    : counts_(std::move(action_counts)), payoffs_(std::move(payoffs)) {
  if (counts_.empty()) throw InputError("normal-form game: no players");
  if (payoffs_.size() != counts_.size()) {
    throw InputError("normal-form game: need one payoff tensor per player");
  }
  num_profiles_ = 1;
  strides_.assign(counts_.size(), 1);
  for (int i = static_cast<int>(counts_.size()) - 1; i >= 0; --i) {
    if (counts_[i] < 1) throw InputError("normal-form game: empty action set");
    strides_[i] = num_profiles_;
    num_profiles_ *= static_cast<std::size_t>(counts_[i]);
  }
  for (const auto& p : payoffs_) {
    if (p.size() != num_profiles_) {
      throw InputError("normal-form game: payoff tensor has " + std::to_string(p.size()) +
                       " entries, expected " + std::to_string(num_profiles_));
    }
    for (double v : p) {
      if (!std::isfinite(v)) throw InputError("normal-form game: non-finite payoff");
    }
  }
}

std::size_t NormalFormGame::flat_index(std::span<const int> actions) const {
  if (actions.size() != counts_.size()) throw InputError("flat_index: wrong arity");
  std::size_t f = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (actions[i] < 0 || actions[i] >= counts_[i]) throw InputError("flat_index: bad action");
    f += strides_[i] * static_cast<std::size_t>(actions[i]);
  }
  return f;
}

std::vector<int> NormalFormGame::actions_of(std::size_t flat) const {
  std::vector<int> a(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) a[i] = action_of(flat, static_cast<int>(i));
  return a;
}

int NormalFormGame::action_of(std::size_t flat, int player) const {
  return static_cast<int>((flat / strides_[player]) % static_cast<std::size_t>(counts_[player]));
}

std::size_t NormalFormGame::with_action(std::size_t flat, int player, int action) const {
  const int cur = action_of(flat, player);
  return flat - strides_[player] * static_cast<std::size_t>(cur) +
         strides_[player] * static_cast<std::size_t>(action);
}

double NormalFormGame::max_abs_payoff(int player) const {
  double m = 0.0;
  for (double v : payoffs_[player]) m = std::max(m, std::abs(v));
  return m;
}

NormalFormGame NormalFormGame::parse(std::string_view text) {
  const KeyValueDocument doc = KeyValueDocument::parse(text);
  const long long n = doc.get_int("players");
  if (n < 1) throw ConfigError("players", "must be positive");
  std::vector<int> counts = doc.get_ints("actions");
  if (static_cast<long long>(counts.size()) != n) {
    throw ConfigError("actions", "expected one count per player");
  }
  std::vector<std::vector<double>> payoffs;
  for (long long i = 1; i <= n; ++i) payoffs.push_back(doc.get_doubles("payoff." + std::to_string(i)));
  for (const std::string& k : doc.unused_keys()) throw ConfigError(k, "unknown key");
  try {
    return NormalFormGame(std::move(counts), std::move(payoffs));
  } catch (const InputError& e) {
    throw ConfigError("payoff", e.what());
  }
}

std::string NormalFormGame::serialize() const {
  std::ostringstream os;
  os << "players = " << num_players() << "\n";
  os << "actions =";
  for (int c : counts_) os << " " << c;
  os << "\n";
  for (int i = 0; i < num_players(); ++i) {
    os << "payoff." << (i + 1) << " =";
    for (double v : payoffs_[i]) os << " " << format_double(v);
    os << "\n";
  }
  return os.str();
}

// Action 0 is cooperate, 1 is defect.
NormalFormGame NormalFormGame::prisoners_dilemma() {
  return NormalFormGame({2, 2}, {{3, 0, 5, 1}, {3, 5, 0, 1}});
}

NormalFormGame NormalFormGame::matching_pennies() {
  return NormalFormGame({2, 2}, {{1, -1, -1, 1}, {-1, 1, 1, -1}});
}

NormalFormGame NormalFormGame::coordination() {
  return NormalFormGame({2, 2}, {{2, 0, 0, 1}, {2, 0, 0, 1}});
}

NormalFormGame NormalFormGame::battle_of_sexes() {
  return NormalFormGame({2, 2}, {{3, 0, 0, 2}, {2, 0, 0, 3}});
}

NormalFormGame NormalFormGame::chicken() {
  return NormalFormGame({2, 2}, {{0, -1, 1, -10}, {0, 1, -1, -10}});
}

NormalFormGame NormalFormGame::stag_hunt() {
  return NormalFormGame({2, 2}, {{4, 0, 3, 3}, {4, 3, 0, 3}});
}

std::vector<std::pair<std::string, NormalFormGame>> NormalFormGame::bundled_2x2() {
  return {{"prisoners_dilemma", prisoners_dilemma()},
          {"matching_pennies", matching_pennies()},
          {"coordination", coordination()},
          {"battle_of_sexes", battle_of_sexes()},
          {"chicken", chicken()},
          {"stag_hunt", stag_hunt()}};
}

NormalFormGame NormalFormGame::random(std::vector<int> action_counts, Rng& rng) {
  std::size_t total = 1;
  for (int c : action_counts) total *= static_cast<std::size_t>(std::max(c, 0));
  std::vector<std::vector<double>> payoffs(action_counts.size());
  for (auto& p : payoffs) {
    p.resize(total);
    for (double& v : p) v = rng.uniform(-1.0, 1.0);
  }
  return NormalFormGame(std::move(action_counts), std::move(payoffs));
}

}  // namespace foce
