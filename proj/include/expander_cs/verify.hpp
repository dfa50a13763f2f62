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
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "expander_cs/design.hpp"
#include "expander_cs/errors.hpp"
#include "expander_cs/graph.hpp"
#include "expander_cs/lp.hpp"
#include "expander_cs/rng.hpp"

namespace xcs {

using SubsetWitness = std::vector<std::size_t>;
using VectorWitness = std::vector<double>;
using Witness = std::variant<std::monostate, SubsetWitness, VectorWitness>;

// Outcome of one structural check. `worst_ratio` is the extreme value of the
// checked quantity (its meaning is per condition, see each check) and
// `witness` is the subset or vector attaining it; when ok is false the
// witness is a genuine violation.
struct VerificationReport {
  std::string condition;
  bool ok = true;
  double worst_ratio = 0.0;
  Witness witness;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kDefaultSubsetBudget = 10'000'000;

// ---------------------------------------------------------------------------
// Standalone evaluators. Every witness re-checks through one of these.
// ---------------------------------------------------------------------------

// |N(I)| / (d |I|).
inline double expansion_ratio(const BipartiteGraph& g, std::span<const std::size_t> I) {
  if (I.empty()) return 1.0;
  return static_cast<double>(neighbor_set(g, I).size()) / static_cast<double>(g.d() * I.size());
}

// |N(I)| >= (1 - eps) d |I| up to rounding of the right-hand side.
inline bool expands(std::size_t union_size, std::size_t d, std::size_t k, double eps) {
  return static_cast<double>(union_size) + 1e-9 >= (1.0 - eps) * static_cast<double>(d * k);
}

// Indices of the s largest |gamma_i|, ties to the smaller index.
inline std::vector<std::size_t> top_indices(const Eigen::VectorXd& gamma, std::size_t s) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(gamma.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  s = std::min(s, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(s), idx.end(), [&](std::size_t a, std::size_t b) {
    const double fa = std::abs(gamma[static_cast<Eigen::Index>(a)]);
    const double fb = std::abs(gamma[static_cast<Eigen::Index>(b)]);
    return fa != fb ? fa > fb : a < b;
  });
  idx.resize(s);
  return idx;
}

// |gamma_S|_1 and |gamma_{S^c}|_1 for S = top_indices(gamma, s).
struct SplitMass {
  double on = 0.0;
  double off = 0.0;
};

inline SplitMass split_mass(const Eigen::VectorXd& gamma, std::size_t s) {
  SplitMass m;
  const double total = gamma.lpNorm<1>();
  for (auto i : top_indices(gamma, s)) m.on += std::abs(gamma[static_cast<Eigen::Index>(i)]);
  m.off = std::max(0.0, total - m.on);
  return m;
}

inline double safe_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

// |X gamma|_1 / |gamma|_1.
template <DesignOperator Op>
double rip1_ratio(const Op& X, const Eigen::VectorXd& gamma) {
  return safe_ratio(X.multiply(gamma).template lpNorm<1>(), gamma.lpNorm<1>());
}

// |gamma_S|_1 / (2 |X gamma|_1 + |gamma_{S^c}|_1 / 2) at the worst S of size
// <= s; UP2 holds for gamma iff this is <= 1.
template <DesignOperator Op>
double up2_ratio(const Op& X, const Eigen::VectorXd& gamma, std::size_t s) {
  const SplitMass m = split_mass(gamma, s);
  return safe_ratio(m.on, 2.0 * X.multiply(gamma).template lpNorm<1>() + 0.5 * m.off);
}

// |gamma_S|_1 / (lambda_hat s |X gamma|_2 + |gamma|_1 / 3) with
// lambda_hat = 4 sqrt(n) / (3 s).
template <DesignOperator Op>
double h_condition_ratio(const Op& X, const Eigen::VectorXd& gamma, std::size_t s) {
  const SplitMass m = split_mass(gamma, s);
  const double lambda_hat = 4.0 * std::sqrt(static_cast<double>(X.rows())) / (3.0 * static_cast<double>(s));
  return safe_ratio(m.on, lambda_hat * static_cast<double>(s) * X.multiply(gamma).norm() + (m.on + m.off) / 3.0);
}

// |gamma_S|_1 / (|gamma_{S^c}|_1 / 2) at the top-s coordinates.
inline double concentration_ratio(const Eigen::VectorXd& gamma, std::size_t s) {
  const SplitMass m = split_mass(gamma, s);
  return safe_ratio(m.on, 0.5 * m.off);
}

// ---------------------------------------------------------------------------
// Expansion
// ---------------------------------------------------------------------------

namespace detail {

// C(p, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t p, std::uint64_t k) {
  if (k > p) return 0;
  k = std::min(k, p - k);
  unsigned __int128 v = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    v = v * (p - k + i) / i;
    if (v > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(v);
}

inline std::uint64_t subset_count(std::uint64_t p, std::uint64_t s) {
  std::uint64_t total = 0;
  for (std::uint64_t k = 1; k <= std::min(s, p); ++k) {
    const auto c = binomial(p, k);
    if (c > std::numeric_limits<std::uint64_t>::max() - total) return std::numeric_limits<std::uint64_t>::max();
    total += c;
  }
  return total;
}

struct ExpansionSearch {
  ExpansionSearch(const BipartiteGraph& graph, std::size_t order, double e, bool stop)
      : g(graph), s(order), eps(e), stop_at_violation(stop), counts(graph.n(), 0) {}

  const BipartiteGraph& g;
  std::size_t s;
  double eps;
  bool stop_at_violation;

  std::vector<std::uint32_t> counts;
  std::size_t union_size = 0;
  std::vector<std::size_t> current;
  std::uint64_t visited = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> worst_subset;
  bool violated = false;

  void add(std::size_t i) {
    for (auto j : g.neighbors(i))
      if (counts[j]++ == 0) ++union_size;
    current.push_back(i);
  }
  void remove(std::size_t i) {
    for (auto j : g.neighbors(i))
      if (--counts[j] == 0) --union_size;
    current.pop_back();
  }

  // Returns false to abort.
  bool visit() {
    ++visited;
    const std::size_t k = current.size();
    const double ratio = static_cast<double>(union_size) / static_cast<double>(g.d() * k);
    if (ratio < worst) {
      worst = ratio;
      worst_subset = current;
    }
    if (!expands(union_size, g.d(), k, eps)) {
      violated = true;
      if (stop_at_violation) {
        worst = ratio;
        worst_subset = current;
        return false;
      }
    }
    return true;
  }

  bool extend(std::size_t start) {
    for (std::size_t i = start; i < g.p(); ++i) {
      add(i);
      bool go = visit();
      if (go && current.size() < s) go = extend(i + 1);
      remove(i);
      if (!go) return false;
    }
    return true;
  }
};

}  // namespace detail

struct ExhaustiveOptions {
  std::uint64_t budget = kDefaultSubsetBudget;
  bool stop_at_first_violation = false;
};

// Enumerates every left subset I with 1 <= |I| <= s. worst_ratio is the
// minimum of |N(I)| / (d |I|); ok iff it never drops below 1 - eps.
inline VerificationReport check_expansion_exhaustive(const BipartiteGraph& g, std::size_t s, double eps,
                                                     const ExhaustiveOptions& opt = {}) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("eps must lie in (0, 1)");
  const std::uint64_t count = detail::subset_count(g.p(), s);
  if (count > opt.budget) throw capacity_error("subset enumeration exceeds budget");
  detail::ExpansionSearch search(g, std::min(s, g.p()), eps, opt.stop_at_first_violation);
  if (search.s > 0) search.extend(0);
  VerificationReport rep;
  rep.condition = "expansion_exhaustive";
  rep.ok = !search.violated;
  rep.worst_ratio = search.s > 0 ? search.worst : 1.0;
  rep.witness = search.worst_subset;
  rep.trials = search.visited;
  return rep;
}

namespace detail {

// Uniform k-subset of [0, p) by Floyd's algorithm, sorted.
inline std::vector<std::size_t> floyd_subset(Rng& rng, std::size_t p, std::size_t k) {
  std::set<std::size_t> chosen;
  for (std::size_t j = p - k; j < p; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

// Size k in 1..s with probability C(p, k) / sum, then a uniform k-subset: a
// uniform draw from all nonempty subsets of size <= s.
inline std::vector<std::size_t> uniform_small_subset(Rng& rng, std::size_t p, std::size_t s) {
  std::vector<double> logw;
  for (std::size_t k = 1; k <= s; ++k)
    logw.push_back(std::lgamma(double(p) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(p - k) + 1));
  const double top = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (auto& w : logw) total += (w = std::exp(w - top));
  double u = rng.uniform() * total;
  std::size_t k = s;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    if (u < logw[i]) {
      k = i + 1;
      break;
    }
    u -= logw[i];
  }
  return floyd_subset(rng, p, k);
}

inline void all_small_subsets(std::size_t p, std::size_t s, std::size_t start, std::vector<std::size_t>& cur,
                              std::vector<std::vector<std::size_t>>& out) {
  for (std::size_t i = start; i < p; ++i) {
    cur.push_back(i);
    out.push_back(cur);
    if (cur.size() < s) all_small_subsets(p, s, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

// Random subsets of size 1..s, uniform over all such subsets. When `trials`
// is at least the number of subsets, the draws are made without replacement
// and therefore cover the whole space. One-sided: can only refute.
inline VerificationReport check_expansion_sampled(const BipartiteGraph& g, std::size_t s, double eps,
                                                  std::uint64_t trials, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("eps must lie in (0, 1)");
  if (trials < 1) throw std::domain_error("need at least one trial");
  s = std::min(s, g.p());
  VerificationReport rep;
  rep.condition = "expansion_sampled";
  rep.seed = seed;
  rep.worst_ratio = 1.0;
  if (s == 0) return rep;

  double worst = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<std::size_t>& I) {
    const auto J = neighbor_set(g, I);
    const double ratio = static_cast<double>(J.size()) / static_cast<double>(g.d() * I.size());
    if (!expands(J.size(), g.d(), I.size(), eps)) rep.ok = false;
    if (ratio < worst) {
      worst = ratio;
      rep.witness = I;
    }
    ++rep.trials;
  };

  if (detail::subset_count(g.p(), s) <= trials) {
    std::vector<std::vector<std::size_t>> all;
    std::vector<std::size_t> cur;
    detail::all_small_subsets(g.p(), s, 0, cur, all);
    Rng rng(seed);
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
      std::swap(all[i], all[i + static_cast<std::size_t>(rng.below(all.size() - i))]);
    for (const auto& I : all) consider(I);
  } else {
    for (std::uint64_t t = 0; t < trials; ++t) {
      Rng rng(derive_seed(seed, t));
      consider(detail::uniform_small_subset(rng, g.p(), s));
    }
  }
  rep.worst_ratio = worst;
  return rep;
}

// ---------------------------------------------------------------------------
// Vector-side checks. All are falsification tests over fixed distributions.
// ---------------------------------------------------------------------------

// s-sparse gamma: uniform support of size s, entries sign * U(0, 1).
// worst_ratio is the smallest |X gamma|_1 / |gamma|_1 seen; ok iff every
// sample lies in [1 - 2 eps, 1].
template <DesignOperator Op>
VerificationReport check_rip1_sampled(const Op& X, std::size_t s, double eps, std::uint64_t trials,
                                      std::uint64_t seed) {
  const std::size_t p = X.cols();
  if (s > p) throw std::domain_error("s exceeds column count");
  VerificationReport rep;
  rep.condition = "rip1_sampled";
  rep.seed = seed;
  double worst = std::numeric_limits<double>::infinity();
  bool upper_violated = false;
  for (std::uint64_t t = 0; t < trials && s > 0; ++t) {
    Rng rng(derive_seed(seed, t));
    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    for (auto i : detail::floyd_subset(rng, p, s)) gamma[static_cast<Eigen::Index>(i)] = rng.sign() * rng.uniform();
    const double ratio = rip1_ratio(X, gamma);
    ++rep.trials;
    if (ratio > 1.0 + 1e-12 && !upper_violated) {
      upper_violated = true;
      rep.ok = false;
      rep.witness = VectorWitness(gamma.data(), gamma.data() + gamma.size());
    }
    if (ratio < worst) {
      worst = ratio;
      if (!upper_violated) rep.witness = VectorWitness(gamma.data(), gamma.data() + gamma.size());
    }
    if (ratio < 1.0 - 2.0 * eps - 1e-12) rep.ok = false;
  }
  rep.worst_ratio = rep.trials ? worst : 1.0;
  return rep;
}

namespace detail {

// The vectors the UP2 and H-condition checks share: the p standard basis
// vectors, then `trials` standard Gaussian vectors from derive_seed(seed, t).
template <class Fn>
void for_each_dense_sample(std::size_t p, std::uint64_t trials, std::uint64_t seed, Fn&& fn) {
  Eigen::VectorXd gamma(static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < p; ++i) {
    gamma.setZero();
    gamma[static_cast<Eigen::Index>(i)] = 1.0;
    fn(gamma);
  }
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    for (Eigen::Index i = 0; i < gamma.size(); ++i) gamma[i] = rng.normal();
    fn(gamma);
  }
}

template <class Ratio>
VerificationReport max_ratio_check(std::string name, std::size_t p, std::uint64_t trials, std::uint64_t seed,
                                   Ratio&& ratio) {
  VerificationReport rep;
  rep.condition = std::move(name);
  rep.seed = seed;
  double worst = -1.0;
  for_each_dense_sample(p, trials, seed, [&](const Eigen::VectorXd& gamma) {
    const double r = ratio(gamma);
    ++rep.trials;
    if (r > worst) {
      worst = r;
      rep.witness = VectorWitness(gamma.data(), gamma.data() + gamma.size());
    }
  });
  rep.worst_ratio = std::max(worst, 0.0);
  rep.ok = !(worst > 1.0 + 1e-12);
  return rep;
}

}  // namespace detail

// UP2 at S = the s largest |gamma_i|, which is the worst S of size <= s for
// that gamma. worst_ratio is the largest up2_ratio; ok iff it is <= 1.
template <DesignOperator Op>
VerificationReport check_up2_sampled(const Op& X, std::size_t s, std::uint64_t trials, std::uint64_t seed) {
  if (s > X.cols()) throw std::domain_error("s exceeds column count");
  return detail::max_ratio_check("up2_sampled", X.cols(), trials, seed,
                                 [&](const Eigen::VectorXd& g) { return up2_ratio(X, g, s); });
}

// H-condition consequence of UP2 on the same vectors check_up2_sampled uses.
template <DesignOperator Op>
VerificationReport check_h_condition_sampled(const Op& X, std::size_t s, std::uint64_t trials, std::uint64_t seed) {
  if (s < 1 || s > X.cols()) throw std::domain_error("need 1 <= s <= column count");
  return detail::max_ratio_check("h_condition_sampled", X.cols(), trials, seed,
                                 [&](const Eigen::VectorXd& g) { return h_condition_ratio(X, g, s); });
}

// Orthonormal basis of ker(X) from a full SVD; singular values at or below
// 1e-10 * max(1, sigma_max) count as zero.
inline Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& Xd) {
  const Eigen::Index p = Xd.cols();
  if (Xd.rows() == 0) return Eigen::MatrixXd::Identity(p, p);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Xd, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * std::max(1.0, sv.size() ? sv[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > tol) ++rank;
  return svd.matrixV().rightCols(p - rank);
}

// Random kernel combinations gamma = K g; worst_ratio is the largest
// |gamma_S|_1 / (|gamma_{S^c}|_1 / 2) at the top-s coordinates. Vacuously ok
// (zero trials) when the kernel is trivial.
template <DesignOperator Op>
VerificationReport check_kernel_concentration(const Op& X, std::size_t s, std::uint64_t trials, std::uint64_t seed) {
  const Eigen::MatrixXd K = kernel_basis(X.dense());
  VerificationReport rep;
  rep.condition = "kernel_concentration";
  rep.seed = seed;
  if (K.cols() == 0) return rep;
  double worst = -1.0;
  Eigen::VectorXd g(K.cols());
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = rng.normal();
    const Eigen::VectorXd gamma = K * g;
    const double r = concentration_ratio(gamma, s);
    ++rep.trials;
    if (r > worst) {
      worst = r;
      rep.witness = VectorWitness(gamma.data(), gamma.data() + gamma.size());
    }
  }
  rep.worst_ratio = std::max(worst, 0.0);
  rep.ok = !(worst > 1.0 + 1e-9);
  return rep;
}

// ---------------------------------------------------------------------------
// Nullspace property, decided exactly by linear programming.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kNspBudget = 10'000;
inline constexpr double kNspMargin = 1e-9;

// Largest sigma'gamma_S over {X gamma = 0, |gamma_{S^c}|_1 <= 1}; +inf when
// unbounded. `gamma_out` receives the maximizer when finite.
inline double nsp_program_value(const Eigen::MatrixXd& Xd, std::span<const std::size_t> S,
                                std::span<const double> signs, Eigen::VectorXd* gamma_out = nullptr) {
  const Eigen::Index n = Xd.rows(), p = Xd.cols();
  std::vector<bool> in_S(static_cast<std::size_t>(p), false);
  for (auto i : S) in_S[i] = true;
  // Variables: gamma+ (p), gamma- (p), budget slack (1).
  LinearProgram lp;
  lp.A = Eigen::MatrixXd::Zero(n + 1, 2 * p + 1);
  lp.A.block(0, 0, n, p) = Xd;
  lp.A.block(0, p, n, p) = -Xd;
  for (Eigen::Index i = 0; i < p; ++i)
    if (!in_S[static_cast<std::size_t>(i)]) lp.A(n, i) = lp.A(n, p + i) = 1.0;
  lp.A(n, 2 * p) = 1.0;
  lp.b = Eigen::VectorXd::Zero(n + 1);
  lp.b[n] = 1.0;
  lp.cost = Eigen::VectorXd::Zero(2 * p + 1);
  for (std::size_t k = 0; k < S.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(S[k]);
    lp.cost[i] = -signs[k];
    lp.cost[p + i] = signs[k];
  }
  const LpResult res = lp_solve(lp);
  if (res.status == LpStatus::unbounded) return std::numeric_limits<double>::infinity();
  if (res.status != LpStatus::optimal) throw solver_error(res.status, "nullspace property LP");
  if (gamma_out) *gamma_out = res.x.head(p) - res.x.segment(p, p);
  return -res.objective;
}

// For every |S| = s and sign pattern on S, maximizes sigma'gamma_S over the
// kernel with |gamma_{S^c}|_1 <= 1. The nullspace property of order s holds
// iff every optimum is below 1 - 1e-9. worst_ratio is the largest optimum;
// the witness is the maximizing kernel vector (or S when unbounded).
template <DesignOperator Op>
VerificationReport nullspace_property_oracle(const Op& X, std::size_t s, std::uint64_t budget = kNspBudget) {
  const std::size_t p = X.cols();
  if (s > p) throw std::domain_error("s exceeds column count");
  const std::uint64_t sets = detail::binomial(p, s);
  if (s >= 63 || sets > budget || (sets << s) > budget) throw capacity_error("nullspace oracle budget exceeded");
  const Eigen::MatrixXd Xd = X.dense();
  VerificationReport rep;
  rep.condition = "nullspace_property";
  if (s == 0) return rep;

  double worst = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> S(s);
  std::iota(S.begin(), S.end(), std::size_t{0});
  std::vector<double> signs(s);
  Eigen::VectorXd gamma;
  while (true) {
    for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << s); ++pattern) {
      for (std::size_t k = 0; k < s; ++k) signs[k] = (pattern >> k) & 1 ? -1.0 : 1.0;
      const double v = nsp_program_value(Xd, S, signs, &gamma);
      ++rep.trials;
      if (v > worst) {
        worst = v;
        if (std::isfinite(v))
          rep.witness = VectorWitness(gamma.data(), gamma.data() + gamma.size());
        else
          rep.witness = SubsetWitness(S);
      }
    }
    // Next combination in lexicographic order.
    std::size_t k = s;
    while (k > 0 && S[k - 1] == p - s + (k - 1)) --k;
    if (k == 0) break;
    ++S[k - 1];
    for (std::size_t j = k; j < s; ++j) S[j] = S[j - 1] + 1;
  }
  rep.worst_ratio = worst;
  rep.ok = worst < 1.0 - kNspMargin;
  return rep;
}

}  // namespace xcs
