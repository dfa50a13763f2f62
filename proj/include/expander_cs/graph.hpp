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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "expander_cs/errors.hpp"
#include "expander_cs/field.hpp"
#include "expander_cs/poly.hpp"
#include "expander_cs/rng.hpp"

namespace xcs {

// d-left-regular bipartite graph G = (A, B, E) with |A| = p left vertices
// and |B| = n right vertices. Each left vertex stores its d right neighbors
// in strictly increasing order.
class BipartiteGraph {
 public:
  BipartiteGraph(std::size_t n, std::size_t d, std::vector<std::vector<std::uint32_t>> neighbors,
                 std::string provenance)
      : n_(n), d_(d), neighbors_(std::move(neighbors)), provenance_(std::move(provenance)) {
    if (d_ < 1) throw std::domain_error("left degree must be at least 1");
    if (d_ > n_) throw std::domain_error("left degree exceeds right vertex count");
    if (neighbors_.empty()) throw std::domain_error("graph needs at least one left vertex");
    for (const auto& list : neighbors_) {
      if (list.size() != d_) throw std::domain_error("left vertex does not have degree d");
      for (std::size_t k = 0; k < list.size(); ++k) {
        if (list[k] >= n_) throw std::domain_error("neighbor index out of range");
        if (k > 0 && list[k] <= list[k - 1]) throw std::domain_error("neighbor list not strictly increasing");
      }
    }
  }

  std::size_t p() const noexcept { return neighbors_.size(); }
  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  const std::string& provenance() const noexcept { return provenance_; }
  const std::vector<std::uint32_t>& neighbors(std::size_t left) const { return neighbors_.at(left); }
  const std::vector<std::vector<std::uint32_t>>& adjacency() const noexcept { return neighbors_; }

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<std::vector<std::uint32_t>> neighbors_;
  std::string provenance_;
};

// (s, eps)-expansion target plus the constants of the explicit construction
// bounds. theta0 is never given numerically; it only feeds report lines.
struct ExpanderParams {
  std::size_t s = 1;
  double eps = 0.125;
  double alpha = 1.0;
  double theta0 = 1.0;

  void validate() const {
    if (s < 1) throw std::domain_error("s must be at least 1");
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("eps must lie in (0, 1)");
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
    if (!(theta0 > 0.0)) throw std::domain_error("theta0 must be positive");
  }
};

// Each left vertex draws d distinct right vertices uniformly, left vertices
// in order 0..p-1 from the single stream Rng(seed).
inline BipartiteGraph random_left_regular(std::size_t p, std::size_t d, std::size_t n, std::uint64_t seed) {
  if (p < 1) throw std::domain_error("p must be at least 1");
  if (d < 1 || d > n) throw std::domain_error("need 1 <= d <= n");
  if (n > std::uint64_t{1} << 31) throw capacity_error("right vertex count too large");
  Rng rng(seed);
  std::vector<std::vector<std::uint32_t>> nbrs(p);
  for (auto& list : nbrs) {
    list = rng.sample_without_replacement(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(d));
    std::sort(list.begin(), list.end());
  }
  std::ostringstream tag;
  tag << "random(seed=" << seed << ",p=" << p << ",d=" << d << ",n=" << n << ")";
  return BipartiteGraph(n, d, std::move(nbrs), tag.str());
}

struct RandomGraphParams {
  std::size_t d;
  std::size_t n;
};

// d = ceil(c log(p/s)), n = ceil(c s log(p/s)).
inline RandomGraphParams suggest_random_params(std::size_t p, std::size_t s, double c) {
  if (s < 1 || p < 2 * s) throw std::domain_error("need p >= 2s");
  if (!(c > 0.0)) throw std::domain_error("c must be positive");
  const double lg = std::log(static_cast<double>(p) / static_cast<double>(s));
  return {static_cast<std::size_t>(std::ceil(c * lg)),
          static_cast<std::size_t>(std::ceil(c * static_cast<double>(s) * lg))};
}

struct PvLimits {
  std::uint64_t max_left = std::uint64_t{1} << 20;
  std::uint64_t max_right = std::uint64_t{1} << 31;
};

// Code-based construction over GF(q). Left vertex index i is the polynomial
// f of degree < l whose base-q digits of i are its coefficients (constant
// digit least significant). With E the smallest monic irreducible of degree
// l over GF(q), f_0 = f and f_j = f_{j-1}^h mod E, the neighbor of f at seed
// y is the tuple (y, f_0(y), ..., f_{m-1}(y)) read as a base-q integer with
// y most significant. Hence p = q^l, d = q, n = q^(m+1).
inline BipartiteGraph pv_expander(const GaloisField& F, std::uint32_t l, std::uint32_t m, std::uint64_t h,
                                  PvLimits limits = {}) {
  if (l < 1 || m < 1 || h < 2) throw std::domain_error("need l >= 1, m >= 1, h >= 2");
  const std::uint64_t q = F.order();
  const std::uint64_t p = detail::checked_power(q, l, limits.max_left);
  const std::uint64_t n = detail::checked_power(q, m + 1, limits.max_right);
  const FieldPoly E = find_irreducible(F, l);

  std::vector<std::vector<std::uint32_t>> nbrs(p);
  std::vector<FieldPoly> iterates(m);
  for (std::uint64_t idx = 0; idx < p; ++idx) {
    iterates[0] = poly_from_index(F, idx, l);
    for (std::uint32_t j = 1; j < m; ++j) iterates[j] = poly_mod_pow(F, iterates[j - 1], h, E);
    auto& list = nbrs[idx];
    list.reserve(q);
    for (std::uint32_t y = 0; y < q; ++y) {
      std::uint64_t code = y;
      for (const auto& fj : iterates) code = code * q + poly_eval(F, fj, FieldElement{y}).code;
      list.push_back(static_cast<std::uint32_t>(code));
    }
    std::sort(list.begin(), list.end());
  }
  std::ostringstream tag;
  tag << "pv(q=" << q << ",l=" << l << ",m=" << m << ",h=" << h << ",E=" << to_string(F, E) << ")";
  return BipartiteGraph(n, q, std::move(nbrs), tag.str());
}

struct PvBounds {
  double d_bound;
  double n_bound;
};

// Left degree and right size bounds of the explicit construction:
//   d <= (theta0 log p log s / eps)^(1 + 1/alpha)
//   n <= s^(1 + alpha) (theta0 log p log s / eps)^(2 + 2/alpha)
// Asymptotic and informational only.
inline PvBounds suggest_pv_bounds(std::size_t p, std::size_t s, const ExpanderParams& params) {
  params.validate();
  if (!(p > s && s >= 2)) throw std::domain_error("need p > s >= 2");
  const double inner =
      params.theta0 * std::log(static_cast<double>(p)) * std::log(static_cast<double>(s)) / params.eps;
  const double a = params.alpha;
  return {std::pow(inner, 1.0 + 1.0 / a),
          std::pow(static_cast<double>(s), 1.0 + a) * std::pow(inner, 2.0 + 2.0 / a)};
}

// Union of the neighbor lists of the left vertices in I, sorted.
inline std::vector<std::uint32_t> neighbor_set(const BipartiteGraph& g, std::span<const std::size_t> I) {
  std::vector<std::uint32_t> out;
  out.reserve(I.size() * g.d());
  for (auto i : I) {
    if (i >= g.p()) throw std::domain_error("left index out of range");
    const auto& list = g.neighbors(i);
    out.insert(out.end(), list.begin(), list.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<std::uint32_t> neighbor_set(const BipartiteGraph& g, std::initializer_list<std::size_t> I) {
  return neighbor_set(g, std::span<const std::size_t>(I.begin(), I.size()));
}

// Vertex i on the left adjacent to right vertex i only (d = 1).
inline BipartiteGraph perfect_matching(std::size_t p) {
  std::vector<std::vector<std::uint32_t>> nbrs(p);
  for (std::size_t i = 0; i < p; ++i) nbrs[i] = {static_cast<std::uint32_t>(i)};
  return BipartiteGraph(p, 1, std::move(nbrs), "matching(p=" + std::to_string(p) + ")");
}

}  // namespace xcs
