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

#include <gtest/gtest.h>

#include "expander_cs/bench.hpp"
#include "expander_cs/solve.hpp"
#include "oracles.hpp"

using namespace xcs;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

Eigen::VectorXd gaussian(Rng& rng, Eigen::Index k, double scale = 1.0) {
  Eigen::VectorXd v(k);
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

// Subgradient optimality of |y - X b|^2 + lambda |b|_1, written out from the
// definition rather than taken from the library.
double kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& b, double lambda) {
  const Eigen::VectorXd g = 2.0 * X.transpose() * (y - X * b);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    if (b[j] > 0) worst = std::max(worst, std::abs(g[j] - lambda));
    else if (b[j] < 0) worst = std::max(worst, std::abs(g[j] + lambda));
    else worst = std::max(worst, std::abs(g[j]) - lambda);
  }
  return worst;
}

}  // namespace

TEST(SoftThreshold, Values) {
  EXPECT_EQ(soft_threshold(3.0, 0.5), 2.5);
  EXPECT_EQ(soft_threshold(-3.0, 0.5), -2.5);
  EXPECT_EQ(soft_threshold(0.2, 0.5), 0.0);
}

TEST(Lasso, MatchingDesignExample) {
  const auto X = DesignMatrix::from_graph(perfect_matching(2));
  const auto sol = lasso(X, vec({3, 0.1}), 1.0);
  ASSERT_TRUE(sol.converged);
  EXPECT_NEAR(sol.beta[0], 2.5, 1e-12);
  EXPECT_EQ(sol.beta[1], 0.0);
  EXPECT_NEAR(sol.objective, 0.25 + 0.01 + 2.5, 1e-12);
}

TEST(Lasso, ZeroPenaltyIdentityFitsExactly) {
  const auto sol = lasso(DenseDesign::identity(3), vec({1, -2, 0.5}), 0.0);
  EXPECT_LT((sol.beta - vec({1, -2, 0.5})).norm(), 1e-12);
}

TEST(Lasso, ZeroSolutionThreshold) {
  const auto I = DenseDesign::identity(2);
  for (double lambda : {6.0, 6.5, 100.0}) EXPECT_EQ(lasso(I, vec({3, 0.1}), lambda).beta, Eigen::VectorXd::Zero(2));
  EXPECT_NE(lasso(I, vec({3, 0.1}), 5.9).beta[0], 0.0);
  const auto X = DesignMatrix::from_graph(random_left_regular(20, 3, 12, 4));
  Rng rng(3);
  const Eigen::VectorXd y = gaussian(rng, 12);
  const double lmax = 2.0 * X.multiply_transpose(y).lpNorm<Eigen::Infinity>();
  EXPECT_EQ(lasso(X, y, lmax).beta, Eigen::VectorXd::Zero(20));
  EXPECT_GT(lasso(X, y, 0.9 * lmax).beta.lpNorm<1>(), 0.0);
}

TEST(Lasso, NegativePenaltyIsDomainError) {
  EXPECT_THROW(lasso(DenseDesign::identity(2), vec({1, 1}), -1.0), std::domain_error);
  EXPECT_THROW(lasso(DenseDesign::identity(2), vec({1, 1, 1}), 1.0), std::domain_error);
}

TEST(Lasso, KktObjectiveAndComparators) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = random_left_regular(40, 4, 25, seed);
    const auto X = DesignMatrix::from_graph(g);
    Rng rng(seed + 100);
    Eigen::VectorXd beta_star = Eigen::VectorXd::Zero(40);
    for (auto i : detail::floyd_subset(rng, 40, 3)) beta_star[Eigen::Index(i)] = rng.uniform(1, 2);
    const Eigen::VectorXd y = X.multiply(beta_star) + gaussian(rng, 25, 0.1);
    const double lambda = rng.uniform(0.01, 0.5);
    const auto sol = lasso(X, y, lambda);
    ASSERT_TRUE(sol.converged);
    EXPECT_LE(sol.kkt_residual, 1e-8);
    EXPECT_LE(kkt_violation(oracle::adjacency(g), y, sol.beta, lambda), 1e-8);
    EXPECT_LE(sol.objective, lasso_objective(X, y, Eigen::VectorXd::Zero(40), lambda));
    EXPECT_LE(sol.objective, lasso_objective(X, y, beta_star, lambda));
    EXPECT_NEAR(sol.objective, (y - X.multiply(sol.beta)).squaredNorm() + lambda * sol.beta.lpNorm<1>(), 1e-12);
  }
}

TEST(Lasso, NonConvergenceFlagged) {
  const auto X = DesignMatrix::from_graph(random_left_regular(40, 4, 25, 1));
  Rng rng(5);
  LassoOptions opt;
  opt.max_iter = 1;
  const auto sol = lasso(X, gaussian(rng, 25), 0.01, opt);
  EXPECT_FALSE(sol.converged);
  EXPECT_GT(sol.kkt_residual, 1e-8);
}

TEST(Lasso, Deterministic) {
  const auto X = DesignMatrix::from_graph(random_left_regular(30, 3, 20, 2));
  Rng rng(9);
  const Eigen::VectorXd y = gaussian(rng, 20);
  EXPECT_EQ(lasso(X, y, 0.1).beta, lasso(X, y, 0.1).beta);
}

TEST(Dantzig, IdentityExample) {
  const auto sol = dantzig(DenseDesign::identity(2), vec({3, 0.1}), 1.0);
  EXPECT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.beta[0], 2.0, 1e-10);
  EXPECT_NEAR(sol.beta[1], 0.0, 1e-10);
  EXPECT_NEAR(sol.l1_norm, 2.0, 1e-10);
}

TEST(Dantzig, ZeroSolutionAboveCorrelation) {
  const auto X = DesignMatrix::from_graph(random_left_regular(12, 3, 8, 6));
  Rng rng(1);
  const Eigen::VectorXd y = gaussian(rng, 8);
  const double lmax = X.multiply_transpose(y).lpNorm<Eigen::Infinity>();
  for (double f : {1.0, 1.5}) EXPECT_LT(dantzig(X, y, f * lmax).beta.lpNorm<1>(), 1e-12);
}

TEST(Dantzig, FeasibilitySlackAndTargetComparison) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto X = DesignMatrix::from_graph(random_left_regular(30, 4, 20, seed));
    Rng rng(seed);
    Eigen::VectorXd beta_star = Eigen::VectorXd::Zero(30);
    for (auto i : detail::floyd_subset(rng, 30, 2)) beta_star[Eigen::Index(i)] = rng.sign() * rng.uniform(1, 2);
    const Eigen::VectorXd z = gaussian(rng, 20, 0.1);
    const Eigen::VectorXd y = X.multiply(beta_star) + z;
    const double lambda = X.multiply_transpose(z).lpNorm<Eigen::Infinity>() * 1.01;
    const auto sol = dantzig(X, y, lambda);
    EXPECT_LE(sol.slack, lambda + 1e-8);
    EXPECT_LE(sol.l1_norm, beta_star.lpNorm<1>() + 1e-9);
  }
}

TEST(Dantzig, ObjectiveNonIncreasingInLambda) {
  const auto X = DesignMatrix::from_graph(random_left_regular(25, 3, 18, 3));
  Rng rng(12);
  const Eigen::VectorXd y = gaussian(rng, 18);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda = 0.0; lambda <= 0.6; lambda += 0.05) {
    const double v = dantzig(X, y, lambda).l1_norm;
    EXPECT_LE(v, prev + 1e-9);
    prev = v;
  }
}

TEST(Dantzig, SingleColumnLpMatchesVertexEnumeration) {
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd Xd(3, 1);
    Xd << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1);
    const DenseDesign X(Xd);
    const Eigen::VectorXd y = gaussian(rng, 3);
    const double lambda = rng.uniform(0, 1);
    const auto lp = dantzig_program(X, y, lambda);
    ASSERT_EQ(lp.variable_count(), 4u);
    const auto expect = oracle::vertex_enumeration(lp);
    ASSERT_TRUE(expect.has_value());
    EXPECT_NEAR(dantzig(X, y, lambda).l1_norm, *expect, 1e-9);
  }
}

TEST(Dantzig, NegativeLambdaIsDomainError) {
  EXPECT_THROW(dantzig(DenseDesign::identity(2), vec({1, 1}), -0.1), std::domain_error);
}

TEST(BasisPursuit, TrivialCases) {
  const auto X = DesignMatrix::from_graph(random_left_regular(10, 2, 6, 1));
  EXPECT_EQ(basis_pursuit(X, Eigen::VectorXd::Zero(6)), Eigen::VectorXd::Zero(10));
  const Eigen::VectorXd y = vec({1, -2, 0.5, 4});
  EXPECT_LT((basis_pursuit(DenseDesign::identity(4), y) - y).norm(), 1e-12);
}

TEST(BasisPursuit, OutsideRangeIsInfeasible) {
  const BipartiteGraph g(3, 1, {{0}, {1}}, "two of three rows");
  try {
    basis_pursuit(DesignMatrix::from_graph(g), vec({1, 1, 1}));
    FAIL() << "expected solver_error";
  } catch (const solver_error& e) {
    EXPECT_EQ(e.status(), LpStatus::infeasible);
  }
}

TEST(BasisPursuit, SmallLpMatchesVertexEnumeration) {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd Xd(2, 3);
    for (auto& v : Xd.reshaped()) v = rng.uniform(-1, 1);
    const Eigen::VectorXd y = gaussian(rng, 2);
    xcs::LinearProgram lp;
    lp.A.resize(2, 6);
    lp.A << Xd, -Xd;
    lp.b = y;
    lp.cost = Eigen::VectorXd::Ones(6);
    const auto expect = oracle::vertex_enumeration(lp);
    ASSERT_TRUE(expect.has_value());
    const Eigen::VectorXd beta = basis_pursuit(DenseDesign(Xd), y);
    EXPECT_NEAR(beta.lpNorm<1>(), *expect, 1e-9);
    EXPECT_LT((Xd * beta - y).norm(), 1e-9);
  }
}

TEST(BasisPursuit, RecoversSparseOnCertifiedExpander) {
  const auto g = pv_expander(GaloisField(FieldSpec::of_order(8)), 2, 2, 3);
  ASSERT_TRUE(check_expansion_exhaustive(g, 4, 0.125).ok);
  const auto X = DesignMatrix::from_graph(g);
  Rng rng(44);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(64);
    for (auto i : detail::floyd_subset(rng, 64, 2)) beta[Eigen::Index(i)] = rng.sign() * rng.uniform(1, 2);
    const Eigen::VectorXd bp = basis_pursuit(X, X.multiply(beta));
    EXPECT_LE((bp - beta).lpNorm<1>() / beta.lpNorm<1>(), 1e-6);
  }
}

TEST(Ols, IdentitySingleSupport) {
  const std::vector<std::size_t> S{0};
  const auto b = ols_on_support(DenseDesign::identity(3), vec({2, 5, 7}), S);
  EXPECT_EQ(b, vec({2, 0, 0}));
}

TEST(Ols, DuplicateColumnsSplitEvenly) {
  Eigen::MatrixXd Xd(3, 2);
  Xd << 1, 1, 2, 2, 0, 0;
  const std::vector<std::size_t> S{0, 1};
  const Eigen::VectorXd y = vec({1, 2, 0});
  const auto b = ols_on_support(DenseDesign(Xd), y, S);
  const Eigen::VectorXd expect = oracle::pseudoinverse(Xd) * y;
  EXPECT_LT((b - expect).norm(), 1e-12);
  EXPECT_NEAR(b[0], 0.5, 1e-12);
  EXPECT_NEAR(b[1], 0.5, 1e-12);
}

TEST(Ols, MatchesPseudoinverseOnRandomSupports) {
  const auto g = random_left_regular(30, 3, 15, 5);
  const auto X = DesignMatrix::from_graph(g);
  const Eigen::MatrixXd D = oracle::adjacency(g);
  Rng rng(6);
  for (int t = 0; t < 30; ++t) {
    const auto S = detail::floyd_subset(rng, 30, 1 + rng.below(10));
    Eigen::MatrixXd XS(15, Eigen::Index(S.size()));
    for (std::size_t k = 0; k < S.size(); ++k) XS.col(Eigen::Index(k)) = D.col(Eigen::Index(S[k]));
    const Eigen::VectorXd y = gaussian(rng, 15);
    const Eigen::VectorXd coef = oracle::pseudoinverse(XS) * y;
    const auto b = ols_on_support(X, y, S);
    for (std::size_t k = 0; k < S.size(); ++k) EXPECT_NEAR(b[Eigen::Index(S[k])], coef[Eigen::Index(k)], 1e-9);
    EXPECT_NEAR(b.lpNorm<1>(), coef.lpNorm<1>(), 1e-9);
  }
  const std::vector<std::size_t> bad{30};
  EXPECT_THROW(ols_on_support(X, Eigen::VectorXd::Zero(15), bad), std::domain_error);
}
