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

#ifndef FOCE_GEOMETRY_H_
#define FOCE_GEOMETRY_H_

#include <optional>
#include <string>
#include <vector>

#include "foce/types.h"

namespace foce {

// A constraint counts as active when its slack is at most this.
inline constexpr double kActiveTol = 1e-9;
// Pairwise row products above this make a polyhedron non-acute.
inline constexpr double kAcuteTol = 1e-12;

enum class SetKind { kBox, kSimplex, kBall, kPolyhedron };

const char* to_string(SetKind kind);

struct ConeDecomposition {
  Vector tangent;
  Vector normal;
};

// Inequalities A x <= b plus equalities E x = e.
struct LinearDescription {
  Matrix A;
  Vector b;
  Matrix E;
  Vector e;
};

class ConvexSet {
 public:
  static ConvexSet Box(Vector lower, Vector upper);
  static ConvexSet Simplex(int dim);
  static ConvexSet Ball(Vector center, double radius);
  // Rows are rescaled to unit norm (offsets with them). Throws InputError if
  // the polyhedron is empty or unbounded.
  static ConvexSet Polyhedron(Matrix rows, Vector offsets);

  SetKind kind() const { return kind_; }
  int dim() const { return dim_; }

  // Ball: 1/radius. Everything else is flat.
  double curvature() const;
  bool is_polyhedral() const { return kind_ != SetKind::kBall; }
  // Box and simplex are always acute; a polyhedron is acute when all pairwise
  // row products are <= kAcuteTol. Throws NotApplicableError for a ball.
  bool is_acute() const;

  bool contains(const Vector& x, double tol = kActiveTol) const;
  Vector project(const Vector& y) const;

  // Moreau split of v into tangent-cone and normal-cone parts at x.
  ConeDecomposition cone_decompose(const Vector& x, const Vector& v) const;
  // Tangent part only. If `clipped` is given it receives the constraints whose
  // multipliers are positive in the cone projection; that set identifies the
  // linear piece of the map v -> tangent part.
  Vector tangent_part(const Vector& x, const Vector& v,
                      std::vector<int>* clipped = nullptr) const;

  // Indices of active constraints. Box: 2k is x_k >= l_k, 2k+1 is x_k <= u_k.
  // Simplex: k is x_k >= 0. Ball: {0} on the sphere. Polyhedron: row index.
  std::vector<int> active_set(const Vector& x) const;

  double diameter() const;
  // max ||x|| over the set (an upper bound for polyhedra).
  double max_norm() const;
  const Vector& bounding_lower() const { return box_lower_; }
  const Vector& bounding_upper() const { return box_upper_; }

  std::optional<LinearDescription> linear_description() const;

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  const Matrix& rows() const { return rows_; }
  const Vector& offsets() const { return offsets_; }

  std::string describe() const;

 private:
  ConvexSet() = default;

  SetKind kind_ = SetKind::kBox;
  int dim_ = 0;
  Vector lower_, upper_;      // box
  Vector center_;             // ball
  double radius_ = 0.0;
  Matrix rows_;               // polyhedron
  Vector offsets_;
  bool acute_ = true;
  Vector box_lower_, box_upper_;
};

// Euclidean projection onto {x : A x <= b} by a dual active-set method
// (Lawson-Hanson on the multipliers). `active` receives the rows with
// positive multipliers. Throws NumericalError after 100 * rows iterations.
Vector project_polyhedron(const Matrix& A, const Vector& b, const Vector& y,
                          std::vector<int>* active = nullptr);

// Profile-level helpers over a product of sets.
bool contains(const std::vector<ConvexSet>& sets, const Profile& x,
              double tol = kActiveTol);
Profile project(const std::vector<ConvexSet>& sets, const Profile& y);
Profile tangent_part(const std::vector<ConvexSet>& sets, const Profile& x,
                     const Profile& v);
double product_diameter(const std::vector<ConvexSet>& sets);
std::vector<int> set_dims(const std::vector<ConvexSet>& sets);

// Seeded point in the set. With `on_boundary` the point is the projection of
// a point drawn outside the set (or a vertex for boxes and simplices).
Vector sample_point(const ConvexSet& set, Rng& rng, bool on_boundary);
Profile sample_profile(const std::vector<ConvexSet>& sets, Rng& rng,
                       double boundary_fraction);

}  // namespace foce

#endif  // FOCE_GEOMETRY_H_
