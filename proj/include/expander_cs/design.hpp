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

#include <concepts>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "expander_cs/graph.hpp"

namespace xcs {

// What the solvers and verifiers need from a design matrix X (n x p).
template <class Op>
concept DesignOperator = requires(const Op& X, const Eigen::VectorXd& v, Eigen::VectorXd& out, std::size_t j,
                                  double a) {
  { X.rows() } -> std::convertible_to<std::size_t>;
  { X.cols() } -> std::convertible_to<std::size_t>;
  { X.multiply(v) } -> std::same_as<Eigen::VectorXd>;
  { X.multiply_transpose(v) } -> std::same_as<Eigen::VectorXd>;
  { X.column_dot(j, v) } -> std::convertible_to<double>;
  { X.column_axpy(j, a, out) };
  { X.column_squared_norm(j) } -> std::convertible_to<double>;
  { X.dense() } -> std::same_as<Eigen::MatrixXd>;
};

namespace detail {
inline void require_length(Eigen::Index got, std::size_t want) {
  if (static_cast<std::size_t>(got) != want) throw std::domain_error("vector length mismatch");
}
}  // namespace detail

// Renormalized adjacency matrix of a left-regular bipartite graph:
// X(j, i) = 1/d when right vertex j neighbors left vertex i, else 0. Rows
// index the right vertices, columns the left ones. Only the row indices are
// stored; the value 1/d is implied, so every column has unit l1 norm and l2
// norm 1/sqrt(d) by construction.
class DesignMatrix {
 public:
  static DesignMatrix from_graph(const BipartiteGraph& g) { return DesignMatrix(g.n(), g.d(), g.adjacency()); }

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return columns_.size(); }
  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return columns_.size(); }
  std::size_t d() const noexcept { return d_; }
  double value() const noexcept { return 1.0 / static_cast<double>(d_); }
  const std::vector<std::uint32_t>& column(std::size_t i) const { return columns_.at(i); }

  Eigen::VectorXd multiply(const Eigen::VectorXd& gamma) const {
    detail::require_length(gamma.size(), p());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < columns_.size(); ++i)
      for (auto j : columns_[i]) out[j] += gamma[static_cast<Eigen::Index>(i)];
    out *= value();
    return out;
  }

  Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& z) const {
    detail::require_length(z.size(), n_);
    Eigen::VectorXd out(static_cast<Eigen::Index>(p()));
    for (std::size_t i = 0; i < columns_.size(); ++i) out[static_cast<Eigen::Index>(i)] = column_dot(i, z);
    return out;
  }

  double column_dot(std::size_t i, const Eigen::VectorXd& z) const {
    double acc = 0.0;
    for (auto j : columns_[i]) acc += z[j];
    return acc * value();
  }

  void column_axpy(std::size_t i, double a, Eigen::VectorXd& out) const {
    const double v = a * value();
    for (auto j : columns_[i]) out[j] += v;
  }

  double column_squared_norm(std::size_t) const noexcept { return value(); }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(p()));
    for (std::size_t i = 0; i < columns_.size(); ++i)
      for (auto j : columns_[i]) X(j, static_cast<Eigen::Index>(i)) = value();
    return X;
  }

 private:
  DesignMatrix(std::size_t n, std::size_t d, std::vector<std::vector<std::uint32_t>> columns)
      : n_(n), d_(d), columns_(std::move(columns)) {}

  std::size_t n_;
  std::size_t d_;
  std::vector<std::vector<std::uint32_t>> columns_;
};

// Arbitrary dense design; used for identity designs and for hand-built
// matrices that violate the normalization conditions.
class DenseDesign {
 public:
  explicit DenseDesign(Eigen::MatrixXd X) : X_(std::move(X)) {}

  static DenseDesign identity(std::size_t n) {
    return DenseDesign(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
  }

  std::size_t rows() const noexcept { return static_cast<std::size_t>(X_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(X_.cols()); }

  Eigen::VectorXd multiply(const Eigen::VectorXd& gamma) const {
    detail::require_length(gamma.size(), cols());
    return X_ * gamma;
  }
  Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& z) const {
    detail::require_length(z.size(), rows());
    return X_.transpose() * z;
  }
  double column_dot(std::size_t i, const Eigen::VectorXd& z) const {
    return X_.col(static_cast<Eigen::Index>(i)).dot(z);
  }
  void column_axpy(std::size_t i, double a, Eigen::VectorXd& out) const {
    out += a * X_.col(static_cast<Eigen::Index>(i));
  }
  double column_squared_norm(std::size_t i) const { return X_.col(static_cast<Eigen::Index>(i)).squaredNorm(); }
  Eigen::MatrixXd dense() const { return X_; }

 private:
  Eigen::MatrixXd X_;
};

static_assert(DesignOperator<DesignMatrix>);
static_assert(DesignOperator<DenseDesign>);

// n rows of p comma-separated entries, 17 significant digits.
template <DesignOperator Op>
void write_dense_csv(std::ostream& os, const Op& X) {
  const Eigen::MatrixXd M = X.dense();
  const auto old_precision = os.precision(17);
  for (Eigen::Index j = 0; j < M.rows(); ++j) {
    for (Eigen::Index i = 0; i < M.cols(); ++i) {
      if (i) os << ',';
      os << M(j, i);
    }
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace xcs
