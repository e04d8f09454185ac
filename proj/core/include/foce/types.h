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

#ifndef FOCE_TYPES_H_
#define FOCE_TYPES_H_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace foce {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// One block per player. Player indices are zero-based everywhere in the
// library; reports print them one-based.
using Profile = std::vector<Vector>;

Vector make_vector(std::initializer_list<double> values);

std::vector<int> block_dims(const Profile& x);
int total_dim(const Profile& x);
Vector flatten(const Profile& x);
Profile unflatten(const Vector& flat, std::span<const int> dims);
Profile zeros_like(std::span<const int> dims);

double dot(const Profile& a, const Profile& b);
double squared_norm(const Profile& x);

// Deterministic generator used by every seeded routine. The uniform draw is
// built from raw bits so results do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();                     // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  int uniform_int(int n);               // [0, n)

 private:
  std::uint64_t state_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Shortest round-trip representation is not needed; 17 significant digits
// always round-trips a double.
std::string format_double(double v);

}  // namespace foce

#endif  // FOCE_TYPES_H_
