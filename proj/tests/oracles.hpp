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

// Reference implementations used only by the tests. They share no code with
// the library beyond its data types.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "expander_cs/graph.hpp"
#include "expander_cs/lp.hpp"

namespace oracle {

// Minimum of c'x over {Ax = b, x >= 0} by enumerating every basic solution.
// Returns nullopt when no basic feasible solution exists. Callers keep the
// feasible region bounded so the minimum is attained at a vertex.
inline std::optional<double> vertex_enumeration(const xcs::LinearProgram& lp) {
  const Eigen::Index m = lp.A.rows(), nv = lp.A.cols();
  std::optional<double> best;
  for (std::uint32_t mask = 0; mask < (1u << nv); ++mask) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < nv; ++j)
      if (mask >> j & 1u) cols.push_back(j);
    if (static_cast<Eigen::Index>(cols.size()) > m) continue;
    Eigen::MatrixXd B(m, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) B.col(Eigen::Index(k)) = lp.A.col(cols[k]);
    if (!cols.empty()) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
      if (lu.rank() < static_cast<Eigen::Index>(cols.size())) continue;
    }
    Eigen::VectorXd xb = cols.empty() ? Eigen::VectorXd() : Eigen::VectorXd(B.colPivHouseholderQr().solve(lp.b));
    if (cols.empty() ? lp.b.norm() > 1e-9 : (B * xb - lp.b).norm() > 1e-9) continue;
    if (!cols.empty() && xb.minCoeff() < -1e-11) continue;
    double obj = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) obj += lp.cost[cols[k]] * xb[Eigen::Index(k)];
    if (!best || obj < *best) best = obj;
  }
  return best;
}

// Expansion by bitmask enumeration with std::set unions. Returns the minimum
// of |N(I)| / (d |I|) over 1 <= |I| <= s.
inline double brute_force_expansion(const xcs::BipartiteGraph& g, std::size_t s) {
  double worst = std::numeric_limits<double>::infinity();
  const std::size_t p = g.p();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << p); ++mask) {
    const auto k = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (k > s) continue;
    std::set<std::uint32_t> J;
    for (std::size_t i = 0; i < p; ++i)
      if (mask >> i & 1u) J.insert(g.neighbors(i).begin(), g.neighbors(i).end());
    worst = std::min(worst, static_cast<double>(J.size()) / static_cast<double>(g.d() * k));
  }
  return worst;
}

inline bool brute_force_expands(const xcs::BipartiteGraph& g, std::size_t s, double eps) {
  const std::size_t p = g.p();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << p); ++mask) {
    const auto k = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (k > s) continue;
    std::set<std::uint32_t> J;
    for (std::size_t i = 0; i < p; ++i)
      if (mask >> i & 1u) J.insert(g.neighbors(i).begin(), g.neighbors(i).end());
    if (static_cast<double>(J.size()) < (1.0 - eps) * static_cast<double>(g.d() * k) - 1e-9) return false;
  }
  return true;
}

// Dense renormalized adjacency built directly from neighbor lists.
inline Eigen::MatrixXd adjacency(const xcs::BipartiteGraph& g) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(Eigen::Index(g.n()), Eigen::Index(g.p()));
  for (std::size_t i = 0; i < g.p(); ++i)
    for (auto j : g.neighbors(i)) X(Eigen::Index(j), Eigen::Index(i)) = 1.0 / static_cast<double>(g.d());
  return X;
}

// Moore-Penrose pseudoinverse through a full SVD.
inline Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::MatrixXd Sinv = Eigen::MatrixXd::Zero(A.cols(), A.rows());
  const double tol = 1e-12 * std::max(1.0, s.size() ? s[0] : 0.0);
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s[k] > tol) Sinv(k, k) = 1.0 / s[k];
  return svd.matrixV() * Sinv * svd.matrixU().transpose();
}

inline double soft(double a, double t) { return a > t ? a - t : (a < -t ? a + t : 0.0); }

// Graph whose columns i < j coincide; everything else is a matching.
inline xcs::BipartiteGraph duplicate_column_graph(std::size_t p, std::size_t i, std::size_t j) {
  std::vector<std::vector<std::uint32_t>> nbrs(p);
  for (std::size_t k = 0; k < p; ++k) nbrs[k] = {static_cast<std::uint32_t>(k < j ? k : k - 1)};
  nbrs[j] = nbrs[i];
  return xcs::BipartiteGraph(p - 1, 1, std::move(nbrs), "duplicate");
}

}  // namespace oracle
