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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "expander_cs/design.hpp"
#include "expander_cs/errors.hpp"
#include "expander_cs/lp.hpp"

namespace xcs {

inline double soft_threshold(double a, double t) noexcept {
  const double mag = std::abs(a) - t;
  return mag > 0.0 ? std::copysign(mag, a) : 0.0;
}

// ---------------------------------------------------------------------------
// Lasso:  min_beta |y - X beta|_2^2 + lambda |beta|_1
//
// No 1/2 and no 1/n in front of the quadratic term, so the coordinate update
// soft-thresholds at lambda/2 and beta = 0 is optimal exactly when
// lambda >= 2 |X'y|_inf.
// ---------------------------------------------------------------------------

struct LassoOptions {
  double tol = 1e-8;
  std::size_t max_iter = 100000;  // full cyclic sweeps
};

struct LassoSolution {
  Eigen::VectorXd beta;
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
  double objective = 0.0;
  bool converged = false;
};

// max_j r_j with r_j = |2 X_j'(y - X beta) - lambda sign(beta_j)| on the
// active set and max(0, |2 X_j'(y - X beta)| - lambda) off it.
template <DesignOperator Op>
double lasso_kkt_residual(const Op& X, const Eigen::VectorXd& residual, const Eigen::VectorXd& beta, double lambda) {
  double worst = 0.0;
  for (std::size_t j = 0; j < X.cols(); ++j) {
    const double g = 2.0 * X.column_dot(j, residual);
    const double b = beta[static_cast<Eigen::Index>(j)];
    const double r = b != 0.0 ? std::abs(g - lambda * (b > 0.0 ? 1.0 : -1.0)) : std::max(0.0, std::abs(g) - lambda);
    worst = std::max(worst, r);
  }
  return worst;
}

template <DesignOperator Op>
double lasso_objective(const Op& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta, double lambda) {
  return (y - X.multiply(beta)).squaredNorm() + lambda * beta.lpNorm<1>();
}

// Cyclic coordinate descent in column order 0..p-1.
template <DesignOperator Op>
LassoSolution lasso(const Op& X, const Eigen::VectorXd& y, double lambda, const LassoOptions& opt = {}) {
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be nonnegative");
  detail::require_length(y.size(), X.rows());
  const std::size_t p = X.cols();
  std::vector<double> norms(p);
  for (std::size_t j = 0; j < p; ++j) norms[j] = X.column_squared_norm(j);

  LassoSolution sol;
  sol.beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  Eigen::VectorXd residual = y;
  const double threshold = 0.5 * lambda;

  sol.kkt_residual = lasso_kkt_residual(X, residual, sol.beta, lambda);
  sol.converged = sol.kkt_residual <= opt.tol;
  while (!sol.converged && sol.iterations < opt.max_iter) {
    ++sol.iterations;
    for (std::size_t j = 0; j < p; ++j) {
      if (norms[j] == 0.0) continue;
      const auto jj = static_cast<Eigen::Index>(j);
      const double old = sol.beta[jj];
      const double rho = X.column_dot(j, residual) + norms[j] * old;
      const double updated = soft_threshold(rho, threshold) / norms[j];
      if (updated != old) {
        X.column_axpy(j, old - updated, residual);
        sol.beta[jj] = updated;
      }
    }
    residual = y - X.multiply(sol.beta);
    sol.kkt_residual = lasso_kkt_residual(X, residual, sol.beta, lambda);
    sol.converged = sol.kkt_residual <= opt.tol;
  }
  sol.objective = residual.squaredNorm() + lambda * sol.beta.lpNorm<1>();
  return sol;
}

// ---------------------------------------------------------------------------
// Dantzig selector:  min |beta|_1  s.t.  |X'(y - X beta)|_inf <= lambda
// ---------------------------------------------------------------------------

struct DantzigSolution {
  Eigen::VectorXd beta;
  double slack = 0.0;    // |X'(y - X beta)|_inf
  double l1_norm = 0.0;  // |beta|_1
  LpStatus status = LpStatus::optimal;
  std::size_t pivots = 0;
};

// Builds the standard-form LP over (u, v, s_lo, s_hi) >= 0 with beta = u - v:
//   G(u - v) - s_lo = X'y - lambda,   G(u - v) + s_hi = X'y + lambda,
// G = X'X, minimizing sum(u + v).
template <DesignOperator Op>
LinearProgram dantzig_program(const Op& X, const Eigen::VectorXd& y, double lambda) {
  const Eigen::MatrixXd Xd = X.dense();
  const Eigen::MatrixXd G = Xd.transpose() * Xd;
  const Eigen::VectorXd c = Xd.transpose() * y;
  const Eigen::Index p = G.rows();
  LinearProgram lp;
  lp.A = Eigen::MatrixXd::Zero(2 * p, 4 * p);
  lp.A.block(0, 0, p, p) = G;
  lp.A.block(0, p, p, p) = -G;
  lp.A.block(0, 2 * p, p, p) = -Eigen::MatrixXd::Identity(p, p);
  lp.A.block(p, 0, p, p) = G;
  lp.A.block(p, p, p, p) = -G;
  lp.A.block(p, 3 * p, p, p) = Eigen::MatrixXd::Identity(p, p);
  lp.b.resize(2 * p);
  lp.b.head(p) = c.array() - lambda;
  lp.b.tail(p) = c.array() + lambda;
  lp.cost = Eigen::VectorXd::Zero(4 * p);
  lp.cost.head(2 * p).setOnes();
  return lp;
}

// Throws solver_error if the LP does not reach an optimal vertex. Among
// several optimal vertices the one reached by the smallest-index rule is
// returned.
template <DesignOperator Op>
DantzigSolution dantzig(const Op& X, const Eigen::VectorXd& y, double lambda, const LpOptions& opt = {}) {
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be nonnegative");
  detail::require_length(y.size(), X.rows());
  const auto p = static_cast<Eigen::Index>(X.cols());
  const LpResult res = lp_solve(dantzig_program(X, y, lambda), opt);
  if (res.status != LpStatus::optimal) throw solver_error(res.status, "dantzig selector LP");
  DantzigSolution sol;
  sol.beta = res.x.head(p) - res.x.segment(p, p);
  sol.slack = X.multiply_transpose(y - X.multiply(sol.beta)).template lpNorm<Eigen::Infinity>();
  sol.l1_norm = sol.beta.template lpNorm<1>();
  sol.status = res.status;
  sol.pivots = res.pivots;
  return sol;
}

// ---------------------------------------------------------------------------
// Basis pursuit:  min |beta|_1  s.t.  X beta = y
// ---------------------------------------------------------------------------

// Linearly dependent rows of X are dropped before the LP (after checking that
// y lies in the range of X), which keeps tall designs cheap.
template <DesignOperator Op>
Eigen::VectorXd basis_pursuit(const Op& X, const Eigen::VectorXd& y, const LpOptions& opt = {}) {
  detail::require_length(y.size(), X.rows());
  const Eigen::MatrixXd Xd = X.dense();
  const Eigen::Index p = Xd.cols();

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Xd);
  const Eigen::VectorXd fit = cod.solve(y);
  const double scale = 1.0 + (y.size() ? y.cwiseAbs().maxCoeff() : 0.0);
  if (y.size() && (Xd * fit - y).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw solver_error(LpStatus::infeasible, "basis pursuit: y is not in the range of X");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xd.transpose());
  const Eigen::Index rank = qr.rank();
  if (rank == 0) return Eigen::VectorXd::Zero(p);
  const auto& perm = qr.colsPermutation().indices();
  std::vector<Eigen::Index> rows(perm.data(), perm.data() + rank);
  std::sort(rows.begin(), rows.end());

  LinearProgram lp;
  lp.A.resize(rank, 2 * p);
  lp.b.resize(rank);
  for (Eigen::Index r = 0; r < rank; ++r) {
    lp.A.row(r).head(p) = Xd.row(rows[static_cast<std::size_t>(r)]);
    lp.A.row(r).tail(p) = -Xd.row(rows[static_cast<std::size_t>(r)]);
    lp.b[r] = y[rows[static_cast<std::size_t>(r)]];
  }
  lp.cost = Eigen::VectorXd::Ones(2 * p);
  const LpResult res = lp_solve(lp, opt);
  if (res.status != LpStatus::optimal) throw solver_error(res.status, "basis pursuit LP");
  return res.x.head(p) - res.x.tail(p);
}

// ---------------------------------------------------------------------------
// Least squares restricted to the columns in `support`; minimum-norm when
// those columns are rank deficient. Zero outside the support.
// ---------------------------------------------------------------------------
template <DesignOperator Op>
Eigen::VectorXd ols_on_support(const Op& X, const Eigen::VectorXd& y, std::span<const std::size_t> support) {
  detail::require_length(y.size(), X.rows());
  const auto p = static_cast<Eigen::Index>(X.cols());
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  if (support.empty()) return beta;
  Eigen::MatrixXd XS(static_cast<Eigen::Index>(X.rows()), static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (support[k] >= X.cols()) throw std::domain_error("support index out of range");
    Eigen::VectorXd e = Eigen::VectorXd::Zero(p);
    e[static_cast<Eigen::Index>(support[k])] = 1.0;
    XS.col(static_cast<Eigen::Index>(k)) = X.multiply(e);
  }
  const Eigen::VectorXd coef = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(XS).solve(y);
  for (std::size_t k = 0; k < support.size(); ++k) beta[static_cast<Eigen::Index>(support[k])] += coef[static_cast<Eigen::Index>(k)];
  return beta;
}

}  // namespace xcs
