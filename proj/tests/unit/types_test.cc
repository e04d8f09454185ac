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
#include <set>

#include <gtest/gtest.h>

#include "foce/errors.h"
#include "foce/types.h"

namespace foce {
namespace {

TEST(Profile, FlattenRoundTrip) {
  Profile x{make_vector({1, 2}), make_vector({3}), make_vector({4, 5, 6})};
  const Vector f = flatten(x);
  ASSERT_EQ(f.size(), 6);
  EXPECT_EQ(f(3), 4.0);
  const std::vector<int> dims = block_dims(x);
  EXPECT_EQ(dims, (std::vector<int>{2, 1, 3}));
  EXPECT_EQ(total_dim(x), 6);
  const Profile y = unflatten(f, dims);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i], y[i]);
}

TEST(Profile, UnflattenRejectsWrongLength) {
  const std::vector<int> dims{2, 2};
  EXPECT_THROW(unflatten(Vector::Zero(3), dims), InputError);
}

TEST(Profile, DotAndNorm) {
  Profile a{make_vector({1, 2}), make_vector({3})};
  Profile b{make_vector({-1, 0.5}), make_vector({2})};
  EXPECT_DOUBLE_EQ(dot(a, b), -1 + 1 + 6);
  EXPECT_DOUBLE_EQ(squared_norm(a), 14.0);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformMoments) {
  Rng rng(7);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 5e-3);
  EXPECT_NEAR(s2 / n, 1.0 / 3.0, 5e-3);
}

TEST(Rng, NormalMoments) {
  Rng rng(9);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 1e-2);
  EXPECT_NEAR(s2 / n, 1.0, 1e-2);
}

TEST(Rng, UniformIntCoversRange) {
  Rng rng(1);
  std::set<int> seen;
  for (int k = 0; k < 1000; ++k) {
    const int v = rng.uniform_int(5);
    ASSERT_GE(v, 0);
    ASSERT_LT(v, 5);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 5u);
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

}  // namespace
}  // namespace foce
