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

#include "foce/geometry.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "foce/errors.h"
#include "foce/lp.h"

namespace foce {

const char* to_string(SetKind kind) {
  switch (kind) {
    case SetKind::kBox: return "box";
    case SetKind::kSimplex: return "simplex";
    case SetKind::kBall: return "ball";
    case SetKind::kPolyhedron: return "polyhedron";
  }
  return "unknown";
}

namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw InputError(std::string(what) + ": non-finite entry");
}

void require_dim(const ConvexSet& s, const Vector& x) {
  if (x.size() != s.dim()) {
    throw InputError("dimension mismatch: set has dim " + std::to_string(s.dim()) +
                     ", point has " + std::to_string(x.size()));
  }
}

Vector project_simplex(const Vector& y) {
  const int n = static_cast<int>(y.size());
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (int j = 0; j < n; ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / (j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  return (y.array() - theta).cwiseMax(0.0).matrix();
}

// Tangent cone of the simplex at x: {w : sum w = 0, w_j >= 0 where x_j = 0}.
// Projection is w_j = v_j - lam off the zero set and max(v_j - lam, 0) on it.
Vector simplex_tangent(const Vector& x, const Vector& v, std::vector<int>* clipped) {
  const int n = static_cast<int>(x.size());
  std::vector<int> zero;
  double sum = 0.0;
  int count = 0;
  for (int j = 0; j < n; ++j) {
    if (x(j) <= kActiveTol) {
      zero.push_back(j);
    } else {
      sum += v(j);
      ++count;
    }
  }
  if (count == 0) throw InputError("simplex tangent: point has no positive entry");
  std::sort(zero.begin(), zero.end(), [&](int a, int b) { return v(a) > v(b); });
  double lam = sum / count;
  std::size_t k = 0;
  while (k < zero.size() && v(zero[k]) > lam) {
    sum += v(zero[k]);
    ++count;
    lam = sum / count;
    ++k;
  }
  Vector w = (v.array() - lam).matrix();
  for (std::size_t z = k; z < zero.size(); ++z) {
    w(zero[z]) = 0.0;
    if (clipped) clipped->push_back(zero[z]);
  }
  if (clipped) std::sort(clipped->begin(), clipped->end());
  return w;
}

}  // namespace

Vector project_polyhedron(const Matrix& A, const Vector& b, const Vector& y,
                          std::vector<int>* active) {
  const int m = static_cast<int>(A.rows());
  if (active) active->clear();
  if (m == 0) return y;
  const Vector r = A * y - b;
  const double tol =
      1e-12 * (1.0 + y.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>());
  Vector lambda = Vector::Zero(m);
  std::vector<int> P;
  std::vector<char> in_p(m, 0);
  Vector x = y;
  const int cap = 100 * m;
  int iter = 0;
  while (true) {
    const Vector w = A * x - b;
    int j_add = -1;
    double w_max = tol;
    for (int j = 0; j < m; ++j) {
      if (!in_p[j] && w(j) > w_max) {
        w_max = w(j);
        j_add = j;
      }
    }
    if (j_add < 0) break;
    P.push_back(j_add);
    in_p[j_add] = 1;
    while (true) {
      if (++iter > cap) throw NumericalError("project_polyhedron: iteration cap reached");
      const int p = static_cast<int>(P.size());
      Matrix G(p, p);
      Vector rp(p);
      for (int a = 0; a < p; ++a) {
        rp(a) = r(P[a]);
        for (int c = 0; c < p; ++c) G(a, c) = A.row(P[a]).dot(A.row(P[c]));
      }
      const Vector zp = G.completeOrthogonalDecomposition().solve(rp);
      if (zp.minCoeff() > 0.0) {
        for (int a = 0; a < p; ++a) lambda(P[a]) = zp(a);
        break;
      }
      double alpha = 1.0;
      for (int a = 0; a < p; ++a) {
        if (zp(a) <= 0.0) {
          const double l = lambda(P[a]);
          alpha = std::min(alpha, l / (l - zp(a)));
        }
      }
      for (int a = 0; a < p; ++a) lambda(P[a]) += alpha * (zp(a) - lambda(P[a]));
      std::vector<int> keep;
      for (int j : P) {
        if (lambda(j) > 1e-15) {
          keep.push_back(j);
        } else {
          lambda(j) = 0.0;
          in_p[j] = 0;
        }
      }
      P.swap(keep);
      if (P.empty()) break;
    }
    x = y - A.transpose() * lambda;
  }
  if ((A * x - b).maxCoeff() > 1e3 * tol + 1e-10) {
    throw NumericalError("project_polyhedron: result infeasible");
  }
  if (active) {
    for (int j = 0; j < m; ++j) {
      if (lambda(j) > 0.0) active->push_back(j);
    }
  }
  return x;
}

ConvexSet ConvexSet::Box(Vector lower, Vector upper) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw InputError("box: lower and upper must have the same positive length");
  }
  require_finite(lower, "box lower");
  require_finite(upper, "box upper");
  if ((lower.array() > upper.array()).any()) throw InputError("box: lower > upper");
  ConvexSet s;
  s.kind_ = SetKind::kBox;
  s.dim_ = static_cast<int>(lower.size());
  s.lower_ = lower;
  s.upper_ = upper;
  s.box_lower_ = std::move(lower);
  s.box_upper_ = std::move(upper);
  return s;
}

ConvexSet ConvexSet::Simplex(int dim) {
  if (dim < 1) throw InputError("simplex: dimension must be >= 1");
  ConvexSet s;
  s.kind_ = SetKind::kSimplex;
  s.dim_ = dim;
  s.box_lower_ = Vector::Zero(dim);
  s.box_upper_ = Vector::Ones(dim);
  return s;
}

ConvexSet ConvexSet::Ball(Vector center, double radius) {
  if (center.size() == 0) throw InputError("ball: empty center");
  require_finite(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InputError("ball: radius must be positive and finite");
  }
  ConvexSet s;
  s.kind_ = SetKind::kBall;
  s.dim_ = static_cast<int>(center.size());
  s.radius_ = radius;
  s.box_lower_ = center.array() - radius;
  s.box_upper_ = center.array() + radius;
  s.center_ = std::move(center);
  s.acute_ = false;
  return s;
}

ConvexSet ConvexSet::Polyhedron(Matrix rows, Vector offsets) {
  const int m = static_cast<int>(rows.rows());
  const int d = static_cast<int>(rows.cols());
  if (m == 0 || d == 0 || offsets.size() != m) {
    throw InputError("polyhedron: need a nonempty row matrix and matching offsets");
  }
  if (!rows.allFinite()) throw InputError("polyhedron rows: non-finite entry");
  require_finite(offsets, "polyhedron offsets");
  for (int j = 0; j < m; ++j) {
    const double nrm = rows.row(j).norm();
    if (nrm < 1e-14) throw InputError("polyhedron: zero row " + std::to_string(j));
    rows.row(j) /= nrm;
    offsets(j) /= nrm;
  }
  ConvexSet s;
  s.kind_ = SetKind::kPolyhedron;
  s.dim_ = d;
  s.acute_ = true;
  for (int a = 0; a < m && s.acute_; ++a) {
    for (int c = a + 1; c < m; ++c) {
      if (rows.row(a).dot(rows.row(c)) > kAcuteTol) {
        s.acute_ = false;
        break;
      }
    }
  }
  // Bounding box by one LP per coordinate and direction, x = x+ - x-.
  LinearProgram lp;
  lp.A_ub.resize(m, 2 * d);
  lp.A_ub << rows, -rows;
  lp.b_ub = offsets;
  s.box_lower_.resize(d);
  s.box_upper_.resize(d);
  for (int k = 0; k < d; ++k) {
    for (double sign : {1.0, -1.0}) {
      lp.c = Vector::Zero(2 * d);
      lp.c(k) = sign;
      lp.c(d + k) = -sign;
      const LpSolution sol = solve_lp(lp);
      if (sol.status == LpStatus::kInfeasible) throw InputError("polyhedron: empty");
      if (sol.status == LpStatus::kUnbounded) throw InputError("polyhedron: unbounded");
      if (sol.status != LpStatus::kOptimal) {
        throw NumericalError("polyhedron: bounding LP did not converge");
      }
      if (sign > 0) {
        s.box_upper_(k) = sol.value;
      } else {
        s.box_lower_(k) = -sol.value;
      }
    }
  }
  s.rows_ = std::move(rows);
  s.offsets_ = std::move(offsets);
  return s;
}

double ConvexSet::curvature() const {
  return kind_ == SetKind::kBall ? 1.0 / radius_ : 0.0;
}

bool ConvexSet::is_acute() const {
  if (kind_ == SetKind::kBall) {
    throw NotApplicableError("acuteness is defined for polyhedral sets only");
  }
  return acute_;
}

bool ConvexSet::contains(const Vector& x, double tol) const {
  require_dim(*this, x);
  switch (kind_) {
    case SetKind::kBox:
      return ((x - lower_).array() >= -tol).all() && ((upper_ - x).array() >= -tol).all();
    case SetKind::kSimplex:
      return (x.array() >= -tol).all() && std::abs(x.sum() - 1.0) <= tol;
    case SetKind::kBall:
      return (x - center_).norm() <= radius_ + tol;
    case SetKind::kPolyhedron:
      return (rows_ * x - offsets_).maxCoeff() <= tol;
  }
  return false;
}

Vector ConvexSet::project(const Vector& y) const {
  require_dim(*this, y);
  switch (kind_) {
    case SetKind::kBox:
      return y.cwiseMax(lower_).cwiseMin(upper_);
    case SetKind::kSimplex:
      return project_simplex(y);
    case SetKind::kBall: {
      const Vector d = y - center_;
      const double n = d.norm();
      if (n <= radius_) return y;
      return center_ + d * (radius_ / n);
    }
    case SetKind::kPolyhedron:
      return project_polyhedron(rows_, offsets_, y);
  }
  return y;
}

std::vector<int> ConvexSet::active_set(const Vector& x) const {
  require_dim(*this, x);
  std::vector<int> act;
  switch (kind_) {
    case SetKind::kBox:
      for (int k = 0; k < dim_; ++k) {
        if (x(k) - lower_(k) <= kActiveTol) act.push_back(2 * k);
        if (upper_(k) - x(k) <= kActiveTol) act.push_back(2 * k + 1);
      }
      break;
    case SetKind::kSimplex:
      for (int k = 0; k < dim_; ++k) {
        if (x(k) <= kActiveTol) act.push_back(k);
      }
      break;
    case SetKind::kBall:
      if (radius_ - (x - center_).norm() <= kActiveTol) act.push_back(0);
      break;
    case SetKind::kPolyhedron:
      for (int j = 0; j < rows_.rows(); ++j) {
        if (offsets_(j) - rows_.row(j).dot(x) <= kActiveTol) act.push_back(j);
      }
      break;
  }
  return act;
}

Vector ConvexSet::tangent_part(const Vector& x, const Vector& v,
                               std::vector<int>* clipped) const {
  require_dim(*this, x);
  require_dim(*this, v);
  if (clipped) clipped->clear();
  switch (kind_) {
    case SetKind::kBox: {
      Vector w = v;
      for (int k = 0; k < dim_; ++k) {
        const bool at_lo = x(k) - lower_(k) <= kActiveTol;
        const bool at_hi = upper_(k) - x(k) <= kActiveTol;
        if (at_lo && w(k) < 0.0) {
          w(k) = 0.0;
          if (clipped) clipped->push_back(2 * k);
        } else if (at_hi && w(k) > 0.0) {
          w(k) = 0.0;
          if (clipped) clipped->push_back(2 * k + 1);
        }
      }
      return w;
    }
    case SetKind::kSimplex:
      return simplex_tangent(x, v, clipped);
    case SetKind::kBall: {
      const Vector d = x - center_;
      const double n = d.norm();
      if (radius_ - n > kActiveTol || n == 0.0) return v;
      const Vector normal = d / n;
      const double out = v.dot(normal);
      if (out <= 0.0) return v;
      if (clipped) clipped->push_back(0);
      return v - out * normal;
    }
    case SetKind::kPolyhedron: {
      const std::vector<int> act = active_set(x);
      if (act.empty()) return v;
      Matrix A(act.size(), dim_);
      for (std::size_t a = 0; a < act.size(); ++a) A.row(a) = rows_.row(act[a]);
      std::vector<int> local;
      Vector w = project_polyhedron(A, Vector::Zero(act.size()), v, &local);
      if (clipped) {
        for (int j : local) clipped->push_back(act[j]);
      }
      return w;
    }
  }
  return v;
}

ConeDecomposition ConvexSet::cone_decompose(const Vector& x, const Vector& v) const {
  if (!contains(x, kActiveTol)) throw InputError("cone_decompose: point outside the set");
  ConeDecomposition c;
  c.tangent = tangent_part(x, v);
  c.normal = v - c.tangent;
  return c;
}

double ConvexSet::diameter() const {
  switch (kind_) {
    case SetKind::kBox: return (upper_ - lower_).norm();
    case SetKind::kSimplex: return dim_ >= 2 ? std::sqrt(2.0) : 0.0;
    case SetKind::kBall: return 2.0 * radius_;
    case SetKind::kPolyhedron: return (box_upper_ - box_lower_).norm();
  }
  return 0.0;
}

double ConvexSet::max_norm() const {
  switch (kind_) {
    case SetKind::kSimplex: return 1.0;
    case SetKind::kBall: return center_.norm() + radius_;
    default: return box_lower_.cwiseAbs().cwiseMax(box_upper_.cwiseAbs()).norm();
  }
}

std::optional<LinearDescription> ConvexSet::linear_description() const {
  LinearDescription ld;
  switch (kind_) {
    case SetKind::kBox:
      ld.A = Matrix::Zero(2 * dim_, dim_);
      ld.b.resize(2 * dim_);
      for (int k = 0; k < dim_; ++k) {
        ld.A(2 * k, k) = -1.0;
        ld.b(2 * k) = -lower_(k);
        ld.A(2 * k + 1, k) = 1.0;
        ld.b(2 * k + 1) = upper_(k);
      }
      ld.E.resize(0, dim_);
      ld.e.resize(0);
      return ld;
    case SetKind::kSimplex:
      ld.A = -Matrix::Identity(dim_, dim_);
      ld.b = Vector::Zero(dim_);
      ld.E = Matrix::Ones(1, dim_);
      ld.e = Vector::Ones(1);
      return ld;
    case SetKind::kPolyhedron:
      ld.A = rows_;
      ld.b = offsets_;
      ld.E.resize(0, dim_);
      ld.e.resize(0);
      return ld;
    case SetKind::kBall:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

std::string vec_str(const Vector& v) {
  std::ostringstream os;
  os << "(";
  for (int k = 0; k < v.size(); ++k) os << (k ? " " : "") << format_double(v(k));
  os << ")";
  return os.str();
}

}  // namespace

std::string ConvexSet::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case SetKind::kBox:
      os << "box lower=" << vec_str(lower_) << " upper=" << vec_str(upper_);
      break;
    case SetKind::kSimplex:
      os << "simplex dim=" << dim_;
      break;
    case SetKind::kBall:
      os << "ball center=" << vec_str(center_) << " radius=" << format_double(radius_);
      break;
    case SetKind::kPolyhedron:
      os << "polyhedron dim=" << dim_ << " rows=" << rows_.rows()
         << (acute_ ? " acute" : " non-acute");
      break;
  }
  return os.str();
}

bool contains(const std::vector<ConvexSet>& sets, const Profile& x, double tol) {
  if (sets.size() != x.size()) throw InputError("contains: player count mismatch");
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!sets[i].contains(x[i], tol)) return false;
  }
  return true;
}

Profile project(const std::vector<ConvexSet>& sets, const Profile& y) {
  if (sets.size() != y.size()) throw InputError("project: player count mismatch");
  Profile x(y.size());
  for (std::size_t i = 0; i < sets.size(); ++i) x[i] = sets[i].project(y[i]);
  return x;
}

Profile tangent_part(const std::vector<ConvexSet>& sets, const Profile& x,
                     const Profile& v) {
  if (sets.size() != x.size() || sets.size() != v.size()) {
    throw InputError("tangent_part: player count mismatch");
  }
  Profile w(v.size());
  for (std::size_t i = 0; i < sets.size(); ++i) w[i] = sets[i].tangent_part(x[i], v[i]);
  return w;
}

double product_diameter(const std::vector<ConvexSet>& sets) {
  double s = 0.0;
  for (const ConvexSet& set : sets) s += set.diameter() * set.diameter();
  return std::sqrt(s);
}

std::vector<int> set_dims(const std::vector<ConvexSet>& sets) {
  std::vector<int> dims;
  for (const ConvexSet& s : sets) dims.push_back(s.dim());
  return dims;
}

Vector sample_point(const ConvexSet& set, Rng& rng, bool on_boundary) {
  const int d = set.dim();
  Vector x(d);
  switch (set.kind()) {
    case SetKind::kBox: {
      const bool vertex = on_boundary && rng.uniform() < 0.5;
      bool pinned_any = false;
      for (int k = 0; k < d; ++k) {
        const bool pin = vertex || (on_boundary && rng.uniform() < 0.5);
        if (pin) {
          x(k) = rng.uniform() < 0.5 ? set.lower()(k) : set.upper()(k);
          pinned_any = true;
        } else {
          x(k) = rng.uniform(set.lower()(k), set.upper()(k));
        }
      }
      if (on_boundary && !pinned_any) {
        const int k = rng.uniform_int(d);
        x(k) = rng.uniform() < 0.5 ? set.lower()(k) : set.upper()(k);
      }
      return x;
    }
    case SetKind::kSimplex: {
      std::vector<char> keep(d, 1);
      if (on_boundary && d > 1) {
        if (rng.uniform() < 1.0 / 3.0) {
          x.setZero();
          x(rng.uniform_int(d)) = 1.0;
          return x;
        }
        int kept = d;
        for (int k = 0; k < d; ++k) {
          if (rng.uniform() < 0.5) {
            keep[k] = 0;
            --kept;
          }
        }
        if (kept == d) keep[rng.uniform_int(d)] = 0;
        if (kept == 0) keep[rng.uniform_int(d)] = 1;
      }
      for (int k = 0; k < d; ++k) x(k) = keep[k] ? -std::log(1.0 - rng.uniform()) : 0.0;
      const double s = x.sum();
      if (s <= 0.0) {
        x.setZero();
        x(0) = 1.0;
        return x;
      }
      return x / s;
    }
    case SetKind::kBall: {
      Vector dir(d);
      for (int k = 0; k < d; ++k) dir(k) = rng.normal();
      const double n = dir.norm();
      if (n == 0.0) return set.center();
      dir /= n;
      const double r = on_boundary ? set.radius()
                                   : set.radius() * std::pow(rng.uniform(), 1.0 / d);
      return set.center() + r * dir;
    }
    case SetKind::kPolyhedron: {
      const Vector lo = set.bounding_lower();
      const Vector hi = set.bounding_upper();
      if (on_boundary) {
        Vector dir(d);
        for (int k = 0; k < d; ++k) dir(k) = rng.normal();
        if (dir.norm() == 0.0) dir(0) = 1.0;
        const Vector mid = 0.5 * (lo + hi);
        const double reach = 2.0 * set.diameter() + 1.0;
        return set.project(mid + reach * dir.normalized() * rng.uniform(0.5, 1.0));
      }
      for (int attempt = 0; attempt < 1000; ++attempt) {
        for (int k = 0; k < d; ++k) x(k) = rng.uniform(lo(k), hi(k));
        if (set.contains(x, 0.0)) return x;
      }
      return set.project(x);
    }
  }
  return x;
}

Profile sample_profile(const std::vector<ConvexSet>& sets, Rng& rng,
                       double boundary_fraction) {
  Profile x;
  x.reserve(sets.size());
  for (const ConvexSet& s : sets) {
    x.push_back(sample_point(s, rng, rng.uniform() < boundary_fraction));
  }
  return x;
}

}  // namespace foce
