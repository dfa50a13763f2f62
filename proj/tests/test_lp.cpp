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

#include "expander_cs/lp.hpp"
#include "expander_cs/rng.hpp"
#include "oracles.hpp"

using namespace xcs;

namespace {

LinearProgram make(std::initializer_list<double> c, Eigen::MatrixXd A, std::initializer_list<double> b) {
  LinearProgram lp;
  lp.cost = Eigen::VectorXd(static_cast<Eigen::Index>(c.size()));
  Eigen::Index k = 0;
  for (double v : c) lp.cost[k++] = v;
  lp.A = std::move(A);
  lp.b = Eigen::VectorXd(static_cast<Eigen::Index>(b.size()));
  k = 0;
  for (double v : b) lp.b[k++] = v;
  return lp;
}

// Feasible by construction (b = A x0, x0 >= 0) and bounded by the extra row
// sum(x) = total.
LinearProgram random_bounded_lp(Rng& rng) {
  const Eigen::Index nv = 2 + Eigen::Index(rng.below(5));  // 2..6
  const Eigen::Index m = 1 + Eigen::Index(rng.below(std::uint64_t(std::min<Eigen::Index>(3, nv - 1))));
  LinearProgram lp;
  lp.A = Eigen::MatrixXd(m, nv);
  for (Eigen::Index r = 0; r < m - 1; ++r)
    for (Eigen::Index c = 0; c < nv; ++c) lp.A(r, c) = std::round(rng.uniform(-3, 3));
  lp.A.row(m - 1).setOnes();
  Eigen::VectorXd x0(nv);
  for (auto& v : x0) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0, 2);
  lp.b = lp.A * x0;
  lp.cost = Eigen::VectorXd(nv);
  for (auto& v : lp.cost) v = rng.uniform(-1, 1);
  return lp;
}

}  // namespace

TEST(LpSolve, SingleEquality) {
  Eigen::MatrixXd A(1, 1);
  A << 1;
  const auto r = lp_solve(make({1}, A, {3}));
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.x[0], 3.0, 1e-12);
  EXPECT_NEAR(r.objective, 3.0, 1e-12);
}

TEST(LpSolve, NegativeRightSideInfeasible) {
  Eigen::MatrixXd A(1, 1);
  A << 1;
  EXPECT_EQ(lp_solve(make({1}, A, {-1})).status, LpStatus::infeasible);
}

TEST(LpSolve, Unbounded) {
  EXPECT_EQ(lp_solve(make({-1}, Eigen::MatrixXd(0, 1), {})).status, LpStatus::unbounded);
  Eigen::MatrixXd A(1, 2);
  A << 1, -1;
  EXPECT_EQ(lp_solve(make({-1, 0}, A, {1})).status, LpStatus::unbounded);
}

TEST(LpSolve, NoConstraintsBoundedBelow) {
  const auto r = lp_solve(make({1, 2}, Eigen::MatrixXd(0, 2), {}));
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_EQ(r.x, Eigen::VectorXd::Zero(2));
}

TEST(LpSolve, DimensionMismatchIsDomainError) {
  Eigen::MatrixXd A(2, 2);
  A.setIdentity();
  EXPECT_THROW(lp_solve(make({1, 1}, A, {1})), std::domain_error);
  EXPECT_THROW(lp_solve(make({1}, A, {1, 1})), std::domain_error);
}

TEST(LpSolve, RedundantRows) {
  Eigen::MatrixXd A(3, 3);
  A << 1, 1, 1,  //
      2, 2, 2,   //
      1, 0, -1;
  const auto r = lp_solve(make({1, 2, 3}, A, {2, 4, 0}));
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, 4.0, 1e-10);
  EXPECT_LT((A * r.x - Eigen::Vector3d(2, 4, 0)).norm(), 1e-10);
}

TEST(LpSolve, BealeCyclingExampleTerminates) {
  Eigen::MatrixXd A(3, 7);
  A << 1, 0, 0, 0.25, -8, -1, 9,  //
      0, 1, 0, 0.5, -12, -0.5, 3,  //
      0, 0, 1, 0, 0, 1, 0;
  const auto r = lp_solve(make({0, 0, 0, -0.75, 20, -0.5, 6}, A, {0, 0, 1}));
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, -1.25, 1e-10);
}

TEST(LpSolve, IterationLimitReported) {
  Eigen::MatrixXd A(2, 4);
  A << 1, 1, 1, 0,  //
      1, -1, 0, 1;
  LpOptions opt;
  opt.max_pivots = 0;
  const auto r = lp_solve(make({-1, -2, 0, 0}, A, {4, 1}), opt);
  EXPECT_EQ(r.status, LpStatus::iteration_limit);
}

TEST(LpSolve, MatchesVertexEnumeration) {
  Rng rng(2024);
  for (int t = 0; t < 300; ++t) {
    const auto lp = random_bounded_lp(rng);
    const auto expect = oracle::vertex_enumeration(lp);
    ASSERT_TRUE(expect.has_value());
    const auto got = lp_solve(lp);
    ASSERT_EQ(got.status, LpStatus::optimal) << "lp " << t;
    EXPECT_NEAR(got.objective, *expect, 1e-9) << "lp " << t;
    EXPECT_GE(got.x.minCoeff(), -1e-12);
    EXPECT_LT((lp.A * got.x - lp.b).lpNorm<Eigen::Infinity>(), 1e-9);
  }
}

TEST(LpSolve, InfeasibleAgreesWithVertexEnumeration) {
  Rng rng(77);
  int infeasible = 0;
  for (int t = 0; t < 200; ++t) {
    LinearProgram lp = random_bounded_lp(rng);
    lp.b[0] += rng.uniform(-4, 4);  // may break feasibility
    const auto expect = oracle::vertex_enumeration(lp);
    const auto got = lp_solve(lp);
    if (!expect) {
      ++infeasible;
      EXPECT_EQ(got.status, LpStatus::infeasible);
    } else {
      ASSERT_EQ(got.status, LpStatus::optimal);
      EXPECT_NEAR(got.objective, *expect, 1e-9);
    }
  }
  EXPECT_GT(infeasible, 0);
}

TEST(LpSolve, Deterministic) {
  Rng rng(5);
  const auto lp = random_bounded_lp(rng);
  const auto a = lp_solve(lp), b = lp_solve(lp);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.pivots, b.pivots);
}
