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

#include "foce/types.h"

#include <bit>
#include <cmath>
#include <cstdio>

#include "foce/errors.h"

namespace foce {

Vector make_vector(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) v(k++) = x;
  return v;
}

std::vector<int> block_dims(const Profile& x) {
  std::vector<int> dims;
  dims.reserve(x.size());
  for (const Vector& b : x) dims.push_back(static_cast<int>(b.size()));
  return dims;
}

int total_dim(const Profile& x) {
  int d = 0;
  for (const Vector& b : x) d += static_cast<int>(b.size());
  return d;
}

Vector flatten(const Profile& x) {
  Vector flat(total_dim(x));
  int off = 0;
  for (const Vector& b : x) {
    flat.segment(off, b.size()) = b;
    off += static_cast<int>(b.size());
  }
  return flat;
}

Profile unflatten(const Vector& flat, std::span<const int> dims) {
  Profile x;
  x.reserve(dims.size());
  int off = 0;
  for (int d : dims) {
    if (off + d > flat.size()) throw InputError("unflatten: vector too short");
    x.push_back(flat.segment(off, d));
    off += d;
  }
  if (off != flat.size()) throw InputError("unflatten: vector too long");
  return x;
}

Profile zeros_like(std::span<const int> dims) {
  Profile x;
  for (int d : dims) x.push_back(Vector::Zero(d));
  return x;
}

double dot(const Profile& a, const Profile& b) {
  if (a.size() != b.size()) throw InputError("dot: player count mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) throw InputError("dot: block size mismatch");
    s += a[i].dot(b[i]);
  }
  return s;
}

double squared_norm(const Profile& x) {
  double s = 0.0;
  for (const Vector& b : x) s += b.squaredNorm();
  return s;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

// xoshiro256**
Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = std::rotl(state_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

int Rng::uniform_int(int n) {
  if (n <= 0) throw InputError("uniform_int: n must be positive");
  return static_cast<int>(next() % static_cast<std::uint64_t>(n));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace foce
