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

#include "foce/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "foce/errors.h"

namespace foce {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Matrix::Zero(rows, cols + 1)), basis_(rows, -1) {}

  int rows() const { return static_cast<int>(t_.rows()); }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  double& at(int r, int c) { return t_(r, c); }
  double rhs(int r) const { return t_(r, cols()); }
  double& rhs(int r) { return t_(r, cols()); }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c, Vector& reduced) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    const double f = reduced(c);
    if (f != 0.0) reduced -= f * t_.row(r).transpose();
    basis_[r] = c;
  }

  // reduced = [cost - cost_B' T, -cost_B' rhs]
  Vector price(const Vector& cost) const {
    Vector reduced(cols() + 1);
    reduced.head(cols()) = cost;
    reduced(cols()) = 0.0;
    for (int r = 0; r < rows(); ++r) {
      const double cb = cost(basis_[r]);
      if (cb != 0.0) reduced -= cb * t_.row(r).transpose();
    }
    return reduced;
  }

  // Bland's rule. Returns false on unboundedness.
  LpStatus optimize(Vector& reduced, const std::vector<char>& allowed,
                    const LpOptions& opt, int& iterations, int cap) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < cols(); ++j) {
        if (allowed[j] && reduced(j) > opt.pivot_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      if (++iterations > cap) return LpStatus::kIterationLimit;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows(); ++r) {
        const double a = t_(r, enter);
        if (a <= opt.pivot_tol) continue;
        const double ratio = rhs(r) / a;
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
             basis_[r] < basis_[leave])) {
          best = std::min(best, ratio);
          leave = r;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      pivot(leave, enter, reduced);
    }
  }

 private:
  Matrix t_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opt) {
  const int n = static_cast<int>(lp.c.size());
  const int m_ub = static_cast<int>(lp.A_ub.rows());
  const int m_eq = static_cast<int>(lp.A_eq.rows());
  if ((m_ub > 0 && lp.A_ub.cols() != n) || (m_eq > 0 && lp.A_eq.cols() != n) ||
      lp.b_ub.size() != m_ub || lp.b_eq.size() != m_eq) {
    throw InputError("solve_lp: inconsistent dimensions");
  }
  const int m = m_ub + m_eq;

  std::vector<char> flipped(m, 0);
  int n_art = 0;
  for (int r = 0; r < m; ++r) {
    const double b = r < m_ub ? lp.b_ub(r) : lp.b_eq(r - m_ub);
    flipped[r] = b < 0.0;
    if (r >= m_ub || flipped[r]) ++n_art;
  }
  const int slack0 = n;
  const int art0 = n + m_ub;
  const int ncols = n + m_ub + n_art;

  Tableau tab(m, ncols);
  std::vector<int> art_row(m, -1);
  int next_art = art0;
  for (int r = 0; r < m; ++r) {
    const double sign = flipped[r] ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      tab.at(r, j) = sign * (r < m_ub ? lp.A_ub(r, j) : lp.A_eq(r - m_ub, j));
    }
    tab.rhs(r) = sign * (r < m_ub ? lp.b_ub(r) : lp.b_eq(r - m_ub));
    if (r < m_ub) tab.at(r, slack0 + r) = sign;
    if (r >= m_ub || flipped[r]) {
      tab.at(r, next_art) = 1.0;
      art_row[r] = next_art;
      tab.basis()[r] = next_art++;
    } else {
      tab.basis()[r] = slack0 + r;
    }
  }

  const int cap = opt.max_iterations > 0 ? opt.max_iterations
                                         : 50 * (m + ncols) + 1000;
  LpSolution sol;
  std::vector<char> allowed(ncols, 1);

  if (n_art > 0) {
    Vector phase1 = Vector::Zero(ncols);
    for (int j = art0; j < ncols; ++j) phase1(j) = -1.0;
    Vector reduced = tab.price(phase1);
    const LpStatus s = tab.optimize(reduced, allowed, opt, sol.iterations, cap);
    if (s == LpStatus::kIterationLimit) {
      sol.status = s;
      return sol;
    }
    // reduced(ncols) holds -value of the phase-one objective.
    if (reduced(ncols) > opt.feasibility_tol * (1.0 + lp.b_ub.lpNorm<Eigen::Infinity>() +
                                                lp.b_eq.lpNorm<Eigen::Infinity>())) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    for (int r = 0; r < m; ++r) {
      if (tab.basis()[r] < art0) continue;
      for (int j = 0; j < art0; ++j) {
        if (std::abs(tab.at(r, j)) > 1e-9) {
          tab.pivot(r, j, reduced);
          break;
        }
      }
    }
    for (int j = art0; j < ncols; ++j) allowed[j] = 0;
  }

  Vector cost = Vector::Zero(ncols);
  cost.head(n) = lp.c;
  Vector reduced = tab.price(cost);
  sol.status = tab.optimize(reduced, allowed, opt, sol.iterations, cap);
  if (sol.status != LpStatus::kOptimal) return sol;

  sol.x = Vector::Zero(n);
  for (int r = 0; r < m; ++r) {
    const int j = tab.basis()[r];
    if (j < n) sol.x(j) = std::max(0.0, tab.rhs(r));
  }
  sol.value = lp.c.dot(sol.x);

  // Duals from B' y = c_B on the unflipped system.
  Matrix B = Matrix::Zero(m, m);
  Vector cb = Vector::Zero(m);
  for (int r = 0; r < m; ++r) {
    const int j = tab.basis()[r];
    if (j < n) {
      for (int i = 0; i < m; ++i) {
        B(i, r) = i < m_ub ? lp.A_ub(i, j) : lp.A_eq(i - m_ub, j);
      }
      cb(r) = lp.c(j);
    } else if (j < art0) {
      B(j - slack0, r) = 1.0;
    } else {
      for (int i = 0; i < m; ++i) {
        if (art_row[i] == j) B(i, r) = 1.0;
      }
    }
  }
  Vector y = Vector::Zero(m);
  if (m > 0) y = B.transpose().fullPivLu().solve(cb);
  sol.dual_ub = y.head(m_ub);
  sol.dual_eq = y.tail(m_eq);

  double cs = 0.0;
  Vector dual_lhs = -lp.c;
  if (m_ub > 0) {
    dual_lhs += lp.A_ub.transpose() * sol.dual_ub;
    const Vector slack = lp.b_ub - lp.A_ub * sol.x;
    for (int r = 0; r < m_ub; ++r) cs += std::abs(sol.dual_ub(r) * slack(r));
  }
  if (m_eq > 0) dual_lhs += lp.A_eq.transpose() * sol.dual_eq;
  for (int j = 0; j < n; ++j) cs += std::abs(sol.x(j) * dual_lhs(j));
  sol.complementary_slackness = cs;
  double dual_value = 0.0;
  if (m_ub > 0) dual_value += lp.b_ub.dot(sol.dual_ub);
  if (m_eq > 0) dual_value += lp.b_eq.dot(sol.dual_eq);
  sol.duality_gap = std::abs(dual_value - sol.value);
  return sol;
}

}  // namespace foce
