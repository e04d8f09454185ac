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

#include "foce/deviations.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "foce/errors.h"

namespace foce {

namespace {

std::vector<int> offsets_of(const std::vector<int>& dims) {
  std::vector<int> off;
  int o = 0;
  for (int d : dims) {
    off.push_back(o);
    o += d;
  }
  return off;
}

// sqrt(sum_k max |(P x + q)_k|^2) over the bounding box of the sets.
double interval_bound(const Matrix& P, const Vector& q, const std::vector<ConvexSet>& sets) {
  Vector lo(P.cols()), hi(P.cols());
  int o = 0;
  for (const ConvexSet& s : sets) {
    lo.segment(o, s.dim()) = s.bounding_lower();
    hi.segment(o, s.dim()) = s.bounding_upper();
    o += s.dim();
  }
  double total = 0.0;
  for (int k = 0; k < P.rows(); ++k) {
    double a = q(k), b = q(k);
    for (int l = 0; l < P.cols(); ++l) {
      const double u = P(k, l) * lo(l), v = P(k, l) * hi(l);
      a += std::min(u, v);
      b += std::max(u, v);
    }
    const double m = std::max(std::abs(a), std::abs(b));
    total += m * m;
  }
  return std::sqrt(total);
}

double spectral_norm(const Matrix& P) {
  if (P.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(P).singularValues()(0);
}

bool symmetric(const Matrix& P) {
  return (P - P.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + P.cwiseAbs().maxCoeff());
}

std::string coords(const Vector& v) {
  std::ostringstream os;
  os << "(";
  for (int k = 0; k < v.size(); ++k) os << (k ? " " : "") << v(k);
  os << ")";
  return os.str();
}

}  // namespace

VectorField VectorField::Affine(std::string name, Matrix P, Vector q,
                                const std::vector<ConvexSet>& sets) {
  VectorField f;
  f.name_ = std::move(name);
  f.kind_ = FieldKind::kAffine;
  f.dims_ = set_dims(sets);
  f.offsets_ = offsets_of(f.dims_);
  for (int d : f.dims_) f.total_ += d;
  if (P.rows() != f.total_ || P.cols() != f.total_ || q.size() != f.total_) {
    throw InputError("affine field '" + f.name_ + "': P must be " + std::to_string(f.total_) +
                     "x" + std::to_string(f.total_) + " and q of matching length");
  }
  if (!P.allFinite() || !q.allFinite()) throw InputError("affine field: non-finite entry");
  f.G_ = interval_bound(P, q, sets);
  f.L_ = spectral_norm(P);
  f.support_.assign(sets.size(), 0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const int o = f.offsets_[i], d = f.dims_[i];
    f.support_[i] = P.middleRows(o, d).cwiseAbs().maxCoeff() > 0.0 ||
                    q.segment(o, d).cwiseAbs().maxCoeff() > 0.0;
  }
  f.affine_ = std::make_shared<const AffineMap>(AffineMap{std::move(P), std::move(q)});
  return f;
}

VectorField VectorField::GradientQuadratic(std::string name, std::vector<Matrix> Q,
                                           std::vector<Vector> c,
                                           const std::vector<ConvexSet>& sets) {
  if (Q.size() != sets.size() || c.size() != sets.size()) {
    throw InputError("quadratic field '" + name + "': need one block per player");
  }
  const std::vector<int> dims = set_dims(sets);
  int total = 0;
  for (int d : dims) total += d;
  Matrix P = Matrix::Zero(total, total);
  Vector q = Vector::Zero(total);
  int o = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const int d = dims[i];
    if (Q[i].rows() != d || Q[i].cols() != d || c[i].size() != d) {
      throw InputError("quadratic field '" + name + "': block " + std::to_string(i + 1) +
                       " has the wrong shape");
    }
    if (!symmetric(Q[i])) {
      throw InputError("quadratic field '" + name + "': block matrices must be symmetric");
    }
    P.block(o, o, d, d) = Q[i];
    q.segment(o, d) = c[i];
    o += d;
  }
  VectorField f = Affine(std::move(name), std::move(P), std::move(q), sets);
  f.kind_ = FieldKind::kGradientQuadratic;
  f.Q_ = std::move(Q);
  f.c_ = std::move(c);
  return f;
}

VectorField VectorField::Custom(std::string name, std::vector<int> dims, FieldFn eval,
                                double G, double L, PotentialFn potential) {
  if (!eval) throw InputError("custom field '" + name + "': missing evaluator");
  if (!(G >= 0.0) || !(L >= 0.0)) throw InputError("custom field: bounds must be non-negative");
  VectorField f;
  f.name_ = std::move(name);
  f.kind_ = FieldKind::kCustom;
  f.dims_ = std::move(dims);
  f.offsets_ = offsets_of(f.dims_);
  for (int d : f.dims_) f.total_ += d;
  f.G_ = G;
  f.L_ = L;
  f.support_.assign(f.dims_.size(), 1);
  f.eval_ = std::move(eval);
  f.potential_ = std::move(potential);
  return f;
}

Profile VectorField::evaluate(const Profile& x) const {
  if (x.size() != dims_.size()) throw InputError("field '" + name_ + "': wrong number of blocks");
  if (kind_ == FieldKind::kCustom) {
    Profile out = eval_(x);
    if (out.size() != dims_.size()) throw InputError("field '" + name_ + "': evaluator output");
    return out;
  }
  if (kind_ == FieldKind::kGradientQuadratic) {
    Profile out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = Q_[i] * x[i] + c_[i];
    return out;
  }
  const Vector flat = affine_->P * flatten(x) + affine_->q;
  return unflatten(flat, dims_);
}

bool VectorField::is_gradient() const {
  switch (kind_) {
    case FieldKind::kGradientQuadratic: return true;
    case FieldKind::kAffine: return symmetric(affine_->P);
    case FieldKind::kCustom: return static_cast<bool>(potential_);
  }
  return false;
}

double VectorField::potential(const Profile& x) const {
  if (!is_gradient()) throw NotApplicableError("field '" + name_ + "' is not a gradient field");
  if (kind_ == FieldKind::kCustom) return potential_(x);
  const Vector flat = flatten(x);
  return 0.5 * flat.dot(affine_->P * flat) + affine_->q.dot(flat);
}

std::optional<AffineMap> VectorField::affine() const {
  if (!affine_) return std::nullopt;
  return *affine_;
}

VectorField VectorField::with_name(std::string name) const {
  VectorField f = *this;
  f.name_ = std::move(name);
  return f;
}

VectorField VectorField::with_bounds(double G, double L) const {
  VectorField f = *this;
  f.G_ = G;
  f.L_ = L;
  return f;
}

bool FieldFamily::coarse() const {
  return std::all_of(fields_.begin(), fields_.end(),
                     [](const VectorField& f) { return f.is_gradient(); });
}

double FieldFamily::max_G() const {
  double m = 0.0;
  for (const VectorField& f : fields_) m = std::max(m, f.G());
  return m;
}

FieldFamily pull_to_point_family(const std::vector<ConvexSet>& sets) {
  FieldFamily fam;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const ConvexSet& s = sets[i];
    std::vector<Vector> vertices;
    if (s.kind() == SetKind::kSimplex) {
      for (int a = 0; a < s.dim(); ++a) vertices.push_back(Vector::Unit(s.dim(), a));
    } else if (s.kind() == SetKind::kBox) {
      if (s.dim() > 16) throw InputError("pull_to_point_family: box has too many vertices");
      for (long mask = 0; mask < (1L << s.dim()); ++mask) {
        Vector v(s.dim());
        for (int k = 0; k < s.dim(); ++k) v(k) = (mask >> k) & 1 ? s.upper()(k) : s.lower()(k);
        vertices.push_back(v);
      }
    } else {
      throw InputError("pull_to_point_family: needs box or simplex action sets");
    }
    for (const Vector& v : vertices) {
      std::vector<Matrix> Q;
      std::vector<Vector> c;
      for (std::size_t j = 0; j < sets.size(); ++j) {
        const int d = sets[j].dim();
        Q.push_back(j == i ? Matrix(-Matrix::Identity(d, d)) : Matrix(Matrix::Zero(d, d)));
        c.push_back(j == i ? v : Vector(Vector::Zero(d)));
      }
      VectorField f = VectorField::GradientQuadratic(
          "pull.p" + std::to_string(i + 1) + "." + coords(v), std::move(Q), std::move(c), sets);
      fam.add(f.with_bounds(s.diameter(), 1.0));
    }
  }
  return fam;
}

VectorField radial_field(const std::vector<ConvexSet>& sets) {
  std::vector<Matrix> Q;
  std::vector<Vector> c;
  for (const ConvexSet& s : sets) {
    Q.push_back(Matrix::Identity(s.dim(), s.dim()));
    c.push_back(Vector::Zero(s.dim()));
  }
  return VectorField::GradientQuadratic("radial", std::move(Q), std::move(c), sets);
}

FieldFamily ce_field_family(const NormalFormGame& game) {
  std::vector<ConvexSet> sets;
  for (int c : game.action_counts()) sets.push_back(ConvexSet::Simplex(c));
  const std::vector<int> dims = set_dims(sets);
  const std::vector<int> off = offsets_of(dims);
  const int total = off.back() + dims.back();
  FieldFamily fam;
  for (int i = 0; i < game.num_players(); ++i) {
    for (int a = 0; a < dims[i]; ++a) {
      for (int b = 0; b < dims[i]; ++b) {
        if (a == b) continue;
        Matrix P = Matrix::Zero(total, total);
        P(off[i] + b, off[i] + a) = 1.0;
        P(off[i] + a, off[i] + a) = -1.0;
        fam.add(VectorField::Affine("swap.p" + std::to_string(i + 1) + ".a" +
                                        std::to_string(a + 1) + "->a" + std::to_string(b + 1),
                                    std::move(P), Vector::Zero(total), sets));
      }
    }
  }
  return fam;
}

VectorField aggregated_pull_field(const NormalFormGame& game, std::span<const int> a_star) {
  if (static_cast<int>(a_star.size()) != game.num_players()) {
    throw InputError("aggregated_pull_field: need one action per player");
  }
  std::vector<ConvexSet> sets;
  std::vector<Matrix> Q;
  std::vector<Vector> c;
  for (int i = 0; i < game.num_players(); ++i) {
    const int d = game.action_counts()[i];
    if (a_star[i] < 0 || a_star[i] >= d) throw InputError("aggregated_pull_field: bad action");
    sets.push_back(ConvexSet::Simplex(d));
    Q.push_back(-Matrix::Identity(d, d));
    c.push_back(Vector::Unit(d, a_star[i]));
  }
  return VectorField::GradientQuadratic("aggregated_pull", std::move(Q), std::move(c), sets);
}

FieldFamily extension_family_2x2() {
  const ConvexSet box = ConvexSet::Box(Vector::Constant(1, -1.0), Vector::Constant(1, 1.0));
  const std::vector<ConvexSet> sets{box, box};
  auto make = [&](const char* name, std::initializer_list<double> p, double q0, double q1) {
    Matrix P(2, 2);
    auto it = p.begin();
    P << it[0], it[1], it[2], it[3];
    return VectorField::Affine(name, P, make_vector({q0, q1}), sets);
  };
  FieldFamily fam;
  fam.add(make("f1+", {-1, 0, 0, 0}, 1, 0));
  fam.add(make("f1-", {-1, 0, 0, 0}, -1, 0));
  fam.add(make("f2+", {0, 0, 0, -1}, 0, 1));
  fam.add(make("f2-", {0, 0, 0, -1}, 0, -1));
  fam.add(make("g1+", {-1, 1, 0, 0}, 0, 0));
  fam.add(make("g1-", {-1, -1, 0, 0}, 0, 0));
  fam.add(make("g2+", {0, 0, 1, -1}, 0, 0));
  fam.add(make("g2-", {0, 0, -1, -1}, 0, 0));
  return fam;
}

TangentialReport check_tangential(const VectorField& field, const std::vector<ConvexSet>& sets,
                                  int samples, std::uint64_t seed) {
  if (samples < 1) throw InputError("check_tangential: need at least one sample");
  Rng rng(seed);
  TangentialReport rep;
  for (int s = 0; s < samples; ++s) {
    const Profile x = sample_profile(sets, rng, 0.75);
    const Profile f = field.evaluate(x);
    double normal = 0.0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      normal += (f[i] - sets[i].tangent_part(x[i], f[i])).squaredNorm();
    }
    normal = std::sqrt(normal);
    if (normal > rep.worst_normal || rep.worst_point.empty()) {
      rep.worst_normal = normal;
      rep.worst_point = x;
    }
  }
  rep.tangential = rep.worst_normal <= 1e-8;
  return rep;
}

VectorField combine(const FieldFamily& family, std::span<const double> weights, bool conical) {
  if (weights.size() != family.size() || family.empty()) {
    throw InputError("combine: need one weight per field");
  }
  double G = 0.0, L = 0.0;
  bool all_affine = true;
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (!std::isfinite(weights[k])) throw InputError("combine: non-finite weight");
    if (conical && weights[k] < 0.0) {
      throw InputError("combine: negative weight " + format_double(weights[k]) +
                       " in a conical combination");
    }
    G += std::abs(weights[k]) * family[k].G();
    L += std::abs(weights[k]) * family[k].L();
    all_affine = all_affine && family[k].affine().has_value();
    if (family[k].dims() != family[0].dims()) throw InputError("combine: fields disagree on dims");
  }
  const std::string name = conical ? "conical_combination" : "linear_combination";
  if (all_affine) {
    const int total = static_cast<int>(family[0].affine()->q.size());
    AffineMap sum{Matrix::Zero(total, total), Vector::Zero(total)};
    for (std::size_t k = 0; k < family.size(); ++k) {
      const AffineMap m = *family[k].affine();
      sum.P += weights[k] * m.P;
      sum.q += weights[k] * m.q;
    }
    // Sets only enter the bound computation, which is replaced below.
    std::vector<ConvexSet> boxes;
    for (int d : family[0].dims()) {
      boxes.push_back(ConvexSet::Box(Vector::Zero(d), Vector::Zero(d)));
    }
    return VectorField::Affine(name, sum.P, sum.q, boxes).with_bounds(G, L);
  }
  std::vector<double> w(weights.begin(), weights.end());
  auto members = std::make_shared<const FieldFamily>(family);
  FieldFn eval = [members, w](const Profile& x) {
    Profile out = zeros_like(block_dims(x));
    for (std::size_t k = 0; k < members->size(); ++k) {
      if (w[k] == 0.0) continue;
      const Profile f = (*members)[k].evaluate(x);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[k] * f[i];
    }
    return out;
  };
  PotentialFn pot;
  if (family.coarse()) {
    pot = [members, w](const Profile& x) {
      double h = 0.0;
      for (std::size_t k = 0; k < members->size(); ++k) {
        if (w[k] != 0.0) h += w[k] * (*members)[k].potential(x);
      }
      return h;
    };
  }
  return VectorField::Custom(name, family[0].dims(), std::move(eval), G, L, std::move(pot));
}

}  // namespace foce
