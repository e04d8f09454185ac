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

#ifndef FOCE_DEVIATIONS_H_
#define FOCE_DEVIATIONS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foce/geometry.h"
#include "foce/normal_form.h"
#include "foce/types.h"

namespace foce {

// x -> P x + q on the flattened profile.
struct AffineMap {
  Matrix P;
  Vector q;
};

enum class FieldKind { kAffine, kGradientQuadratic, kCustom };

using FieldFn = std::function<Profile(const Profile& x)>;
using PotentialFn = std::function<double(const Profile& x)>;

// A deviation direction field on the product of action sets with bounds
// G = sup ||f|| and L = Lipschitz constant. Gradient fields also carry the
// scalar function they differentiate.
class VectorField {
 public:
  // G and L are derived from the sets (interval bound and spectral norm).
  static VectorField Affine(std::string name, Matrix P, Vector q,
                            const std::vector<ConvexSet>& sets);
  // Block i is Q_i x_i + c_i with Q_i symmetric; the field is the gradient of
  // sum_i (x_i' Q_i x_i / 2 + c_i' x_i).
  static VectorField GradientQuadratic(std::string name, std::vector<Matrix> Q,
                                       std::vector<Vector> c,
                                       const std::vector<ConvexSet>& sets);
  // `potential` marks the field as a gradient of that function.
  static VectorField Custom(std::string name, std::vector<int> dims, FieldFn eval,
                            double G, double L, PotentialFn potential = {});

  const std::string& name() const { return name_; }
  FieldKind kind() const { return kind_; }
  const std::vector<int>& dims() const { return dims_; }
  double G() const { return G_; }
  double L() const { return L_; }
  // Players whose block can be nonzero.
  const std::vector<char>& support() const { return support_; }

  Profile evaluate(const Profile& x) const;
  bool is_gradient() const;
  // Value of the function this field is the gradient of.
  double potential(const Profile& x) const;
  std::optional<AffineMap> affine() const;

  VectorField with_name(std::string name) const;
  VectorField with_bounds(double G, double L) const;

 private:
  VectorField() = default;

  std::string name_;
  FieldKind kind_ = FieldKind::kAffine;
  std::vector<int> dims_, offsets_;
  int total_ = 0;
  double G_ = 0.0, L_ = 0.0;
  std::vector<char> support_;
  std::shared_ptr<const AffineMap> affine_;
  std::vector<Matrix> Q_;
  std::vector<Vector> c_;
  FieldFn eval_;
  PotentialFn potential_;
};

class FieldFamily {
 public:
  FieldFamily() = default;
  explicit FieldFamily(std::vector<VectorField> fields) : fields_(std::move(fields)) {}

  void add(VectorField f) { fields_.push_back(std::move(f)); }
  std::size_t size() const { return fields_.size(); }
  bool empty() const { return fields_.empty(); }
  const VectorField& operator[](std::size_t k) const { return fields_[k]; }
  const std::vector<VectorField>& fields() const { return fields_; }
  // Every member is a gradient field.
  bool coarse() const;
  double max_G() const;

 private:
  std::vector<VectorField> fields_;
};

// One field per player i and vertex v of X_i: block i is v - x_i. Needs box
// or simplex sets.
FieldFamily pull_to_point_family(const std::vector<ConvexSet>& sets);
// Gradient of ||x||^2 / 2.
VectorField radial_field(const std::vector<ConvexSet>& sets);
// Swap fields x_i(a) (e_b - e_a), a != b, on a product of simplices.
FieldFamily ce_field_family(const NormalFormGame& game);
// All players pulled to the pure profile a_star at once.
VectorField aggregated_pull_field(const NormalFormGame& game, std::span<const int> a_star);
// Eight affine fields on [-1, 1]^2 whose span is every affine field there.
FieldFamily extension_family_2x2();

struct TangentialReport {
  bool tangential = true;
  double worst_normal = 0.0;
  Profile worst_point;
};

// Tangential when the normal part of f(x) stays <= 1e-8 on boundary-biased
// samples.
TangentialReport check_tangential(const VectorField& field, const std::vector<ConvexSet>& sets,
                                  int samples = 10000, std::uint64_t seed = 0);

// sum_k weights[k] * family[k]. With `conical` every weight must be >= 0.
VectorField combine(const FieldFamily& family, std::span<const double> weights, bool conical);

}  // namespace foce

#endif  // FOCE_DEVIATIONS_H_
