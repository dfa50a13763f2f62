// Copyright 2026 The expander-cs Authors.
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

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "expander_cs/errors.hpp"

namespace xcs {

// min c'x  subject to  A x = b,  x >= 0.
struct LinearProgram {
  Eigen::VectorXd cost;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  std::size_t variable_count() const noexcept { return static_cast<std::size_t>(cost.size()); }
  std::size_t constraint_count() const noexcept { return static_cast<std::size_t>(A.rows()); }
};

struct LpOptions {
  double optimality_tol = 1e-10;  // reduced costs >= -tol at optimum
  double pivot_tol = 1e-11;
  double feasibility_tol = 1e-9;  // phase-one residual, relative to 1 + |b|_inf
  std::size_t max_pivots = 200000;
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::size_t pivots = 0;
};

namespace detail {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Simplex {
 public:
  Simplex(Tableau T, std::vector<std::size_t> basis, const LpOptions& opt, std::size_t& pivots)
      : T_(std::move(T)), basis_(std::move(basis)), opt_(opt), pivots_(pivots) {}

  Eigen::Index rows() const { return T_.rows() - 1; }
  Eigen::Index rhs() const { return T_.cols() - 1; }
  Tableau& tableau() { return T_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(Eigen::Index r, Eigen::Index q) {
    T_.row(r) /= T_(r, q);
    for (Eigen::Index i = 0; i < T_.rows(); ++i) {
      if (i == r) continue;
      const double f = T_(i, q);
      if (f != 0.0) T_.row(i) -= f * T_.row(r);
    }
    T_(r, q) = 1.0;
    basis_[static_cast<std::size_t>(r)] = static_cast<std::size_t>(q);
    ++pivots_;
  }

  // Largest-coefficient entering rule over the first `entering_limit`
  // columns; after kDegenerateStreak consecutive degenerate pivots the
  // smallest-index (Bland) rule takes over until the objective moves again,
  // which rules out cycling.
  LpStatus run(Eigen::Index entering_limit) {
    const Eigen::Index obj = rows();
    std::size_t degenerate = 0;
    while (true) {
      if (pivots_ >= opt_.max_pivots) return LpStatus::iteration_limit;
      const bool bland = degenerate >= kDegenerateStreak;
      Eigen::Index q = -1;
      double most = -opt_.optimality_tol;
      for (Eigen::Index j = 0; j < entering_limit; ++j) {
        const double rc = T_(obj, j);
        if (rc >= most) continue;
        q = j;
        if (bland) break;
        most = rc;
      }
      if (q < 0) return LpStatus::optimal;
      Eigen::Index r = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < obj; ++i) {
        const double a = T_(i, q);
        if (a <= opt_.pivot_tol) continue;
        const double ratio = std::max(0.0, T_(i, rhs())) / a;
        if (r < 0) {
          best = ratio;
          r = i;
          continue;
        }
        const double tie = 1e-12 * (1.0 + std::abs(best));
        if (ratio < best - tie) {
          best = ratio;
          r = i;
        } else if (ratio <= best + tie) {
          // Bland: smallest basic index leaves. Otherwise the larger pivot.
          const bool better = bland ? basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(r)]
                                    : a > T_(r, q);
          if (better) r = i;
        }
      }
      if (r < 0) return LpStatus::unbounded;
      degenerate = best * std::abs(T_(obj, q)) <= 1e-12 ? degenerate + 1 : 0;
      pivot(r, q);
    }
  }

  static constexpr std::size_t kDegenerateStreak = 50;

 private:
  Tableau T_;
  std::vector<std::size_t> basis_;
  const LpOptions& opt_;
  std::size_t& pivots_;
};

}  // namespace detail

namespace detail {

// Column j is a crash candidate for row i when its only nonzero entry in the
// (sign-normalized) constraint matrix is a positive one in row i.
inline std::vector<Eigen::Index> crash_columns(const Eigen::MatrixXd& A, const Eigen::VectorXd& flip) {
  const Eigen::Index m = A.rows(), N = A.cols();
  std::vector<Eigen::Index> col_for_row(static_cast<std::size_t>(m), -1);
  for (Eigen::Index j = 0; j < N; ++j) {
    Eigen::Index row = -1;
    bool singleton = true;
    for (Eigen::Index i = 0; i < m && singleton; ++i) {
      if (A(i, j) == 0.0) continue;
      if (row >= 0) singleton = false;
      row = i;
    }
    if (!singleton || row < 0 || flip[row] * A(row, j) <= 0.0) continue;
    auto& slot = col_for_row[static_cast<std::size_t>(row)];
    if (slot < 0) slot = j;
  }
  return col_for_row;
}

// Tableau [B^-1 A_rows | B^-1 b_rows] with reduced-cost row c - c_B B^-1 A,
// computed afresh from the original data. Returns false if B is singular.
inline bool reinvert(const LinearProgram& lp, const std::vector<Eigen::Index>& rows,
                     const std::vector<std::size_t>& basis, Tableau& T) {
  const auto k = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index N = lp.A.cols();
  Eigen::MatrixXd Ar(k, N);
  Eigen::VectorXd br(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    Ar.row(r) = lp.A.row(rows[static_cast<std::size_t>(r)]);
    br[r] = lp.b[rows[static_cast<std::size_t>(r)]];
  }
  Eigen::MatrixXd B(k, k);
  Eigen::VectorXd cb(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    B.col(r) = Ar.col(static_cast<Eigen::Index>(basis[static_cast<std::size_t>(r)]));
    cb[r] = lp.cost[static_cast<Eigen::Index>(basis[static_cast<std::size_t>(r)])];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
  if (!lu.isInvertible()) return false;
  T.resize(k + 1, N + 1);
  T.topLeftCorner(k, N) = lu.solve(Ar);
  T.topRightCorner(k, 1) = lu.solve(br);
  const Eigen::VectorXd duals = lu.transpose().solve(cb);
  T.bottomLeftCorner(1, N) = (lp.cost - Ar.transpose() * duals).transpose();
  T(k, N) = -cb.dot(T.topRightCorner(k, 1).col(0));
  for (Eigen::Index r = 0; r < k; ++r) {
    T.row(r).head(N)(static_cast<Eigen::Index>(basis[static_cast<std::size_t>(r)])) = 1.0;
    T(k, static_cast<Eigen::Index>(basis[static_cast<std::size_t>(r)])) = 0.0;
  }
  return true;
}

}  // namespace detail

// Two-phase dense tableau simplex with the anti-cycling rule of Simplex::run. Phase one
// starts from singleton slack columns where their sign allows and adds an
// artificial only for the remaining rows; it minimizes the sum of those
// artificials. Artificials left in the basis at zero are pivoted out or their
// rows dropped as redundant. At a phase-two optimum the tableau is rebuilt
// from the original data and the run resumes if that exposes drift.
inline LpResult lp_solve(const LinearProgram& lp, const LpOptions& opt = {}) {
  const Eigen::Index m = lp.A.rows();
  const Eigen::Index N = lp.A.cols();
  if (lp.cost.size() != N || lp.b.size() != m) throw std::domain_error("linear program dimension mismatch");
  if (N == 0) throw std::domain_error("linear program has no variables");

  LpResult result;
  result.x = Eigen::VectorXd::Zero(N);
  if (m == 0) {
    // Only x >= 0: bounded iff c >= 0, optimum at 0.
    result.status = (lp.cost.array() < -opt.optimality_tol).any() ? LpStatus::unbounded : LpStatus::optimal;
    result.objective = 0.0;
    return result;
  }

  Eigen::VectorXd flip(m);
  for (Eigen::Index i = 0; i < m; ++i) flip[i] = lp.b[i] < 0.0 ? -1.0 : 1.0;
  const auto crash = detail::crash_columns(lp.A, flip);

  detail::Tableau T = detail::Tableau::Zero(m + 1, N + m + 1);
  std::vector<std::size_t> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index c = crash[static_cast<std::size_t>(i)];
    const double scale = c >= 0 ? flip[i] / (flip[i] * lp.A(i, c)) : flip[i];
    T.row(i).head(N) = scale * lp.A.row(i);
    T(i, N + i) = 1.0;
    T(i, N + m) = scale * lp.b[i];
    if (c >= 0) {
      T(i, c) = 1.0;
      basis[static_cast<std::size_t>(i)] = static_cast<std::size_t>(c);
    } else {
      basis[static_cast<std::size_t>(i)] = static_cast<std::size_t>(N + i);
      T.row(m).head(N) -= T.row(i).head(N);
      T(m, N + m) -= T(i, N + m);
    }
  }

  detail::Simplex phase1(std::move(T), std::move(basis), opt, result.pivots);
  const LpStatus s1 = phase1.run(N);
  if (s1 == LpStatus::iteration_limit) {
    result.status = s1;
    return result;
  }
  auto& T1 = phase1.tableau();
  auto& B1 = phase1.basis();
  double infeasibility = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (B1[static_cast<std::size_t>(i)] >= static_cast<std::size_t>(N)) infeasibility += T1(i, N + m);
  if (infeasibility > opt.feasibility_tol * (1.0 + lp.b.cwiseAbs().maxCoeff())) {
    result.status = LpStatus::infeasible;
    return result;
  }

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (B1[static_cast<std::size_t>(i)] < static_cast<std::size_t>(N)) {
      keep.push_back(i);
      continue;
    }
    Eigen::Index q = -1;
    double best = 1e-9;
    for (Eigen::Index j = 0; j < N; ++j)
      if (std::abs(T1(i, j)) > best) best = std::abs(T1(i, j)), q = j;
    if (q >= 0) {
      phase1.pivot(i, q);
      keep.push_back(i);
    }
  }

  const auto k = static_cast<Eigen::Index>(keep.size());
  std::vector<std::size_t> basis2(keep.size());
  for (Eigen::Index r = 0; r < k; ++r)
    basis2[static_cast<std::size_t>(r)] = B1[static_cast<std::size_t>(keep[static_cast<std::size_t>(r)])];
  detail::Tableau T2;
  if (!detail::reinvert(lp, keep, basis2, T2)) {
    T2 = detail::Tableau::Zero(k + 1, N + 1);
    for (Eigen::Index r = 0; r < k; ++r) {
      T2.row(r).head(N) = T1.row(keep[static_cast<std::size_t>(r)]).head(N);
      T2(r, N) = T1(keep[static_cast<std::size_t>(r)], N + m);
    }
    T2.row(k).head(N) = lp.cost.transpose();
    for (Eigen::Index r = 0; r < k; ++r) {
      const double cb = lp.cost[static_cast<Eigen::Index>(basis2[static_cast<std::size_t>(r)])];
      if (cb != 0.0) T2.row(k) -= cb * T2.row(r);
    }
  }

  detail::Simplex phase2(std::move(T2), std::move(basis2), opt, result.pivots);
  for (int round = 0;; ++round) {
    result.status = phase2.run(N);
    if (result.status != LpStatus::optimal || round == 3) break;
    detail::Tableau fresh;
    if (!detail::reinvert(lp, keep, phase2.basis(), fresh)) break;
    const bool drifted = (fresh.topRightCorner(k, 1).array() < -opt.feasibility_tol).any() ||
                         (fresh.bottomLeftCorner(1, N).array() < -opt.optimality_tol).any();
    phase2.tableau() = std::move(fresh);
    if (!drifted) break;
    // Clamp tiny negative basics left by roundoff before resuming.
    for (Eigen::Index r = 0; r < k; ++r) phase2.tableau()(r, N) = std::max(0.0, phase2.tableau()(r, N));
  }
  if (result.status != LpStatus::optimal) return result;
  for (Eigen::Index r = 0; r < k; ++r)
    result.x[static_cast<Eigen::Index>(phase2.basis()[static_cast<std::size_t>(r)])] =
        std::max(0.0, phase2.tableau()(r, N));
  result.objective = lp.cost.dot(result.x);
  return result;
}

}  // namespace xcs
