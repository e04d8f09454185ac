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

#ifndef FOCE_QUADRATURE_H_
#define FOCE_QUADRATURE_H_

#include <vector>

namespace foce {

struct QuadratureRule {
  std::vector<double> nodes;    // in [0, 1]
  std::vector<double> weights;  // sum to 1
};

// n-point Gauss-Legendre rule mapped to [0, 1].
const QuadratureRule& gauss_legendre(int n);
// n-point composite midpoint rule on [0, 1].
const QuadratureRule& midpoint_rule(int n);

}  // namespace foce

#endif  // FOCE_QUADRATURE_H_
