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

#include "expander_cs/field.hpp"
#include "expander_cs/poly.hpp"

using namespace xcs;

namespace {

FieldPoly P(const GaloisField& F, std::vector<std::uint32_t> codes) {
  std::vector<FieldElement> c;
  for (auto v : codes) c.push_back(F.element(v));
  return FieldPoly(std::move(c));
}

// GF(9) as pairs (a0, a1) = a0 + a1 x with x^2 = -1, multiplied by hand.
std::uint32_t gf9_mul(std::uint32_t a, std::uint32_t b) {
  const int a0 = a % 3, a1 = a / 3, b0 = b % 3, b1 = b / 3;
  const int c0 = ((a0 * b0 - a1 * b1) % 3 + 3) % 3;
  const int c1 = (a0 * b1 + a1 * b0) % 3;
  return static_cast<std::uint32_t>(c0 + 3 * c1);
}

std::vector<std::uint32_t> orders() { return {2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 243, 256, 512}; }

}  // namespace

TEST(FieldOps, PrimeFieldExamples) {
  GaloisField F(FieldSpec::prime(7));
  EXPECT_EQ(F.mul(F.element(3), F.element(5)), F.one());
  EXPECT_EQ(F.inv(F.element(3)), F.element(5));
  EXPECT_EQ(F.add(F.element(4), F.element(5)), F.element(2));
}

TEST(FieldOps, Gf9SquareOfX) {
  GaloisField F(FieldSpec::of_order(9));
  ASSERT_EQ(F.spec().modulus, (std::vector<std::uint32_t>{1, 0, 1}));
  const FieldElement x = F.from_coefficients(std::vector<std::uint32_t>{0, 1});
  EXPECT_EQ(F.mul(x, x), F.element(2));
}

TEST(FieldOps, Gf9MatchesHandMultiplication) {
  GaloisField F(FieldSpec::of_order(9));
  for (std::uint32_t a = 0; a < 9; ++a)
    for (std::uint32_t b = 0; b < 9; ++b) EXPECT_EQ(F.mul(F.element(a), F.element(b)).code, gf9_mul(a, b));
}

TEST(FieldOps, PrimeFieldMatchesModularArithmetic) {
  for (std::uint32_t r : {2u, 3u, 5u, 7u, 11u, 13u, 101u, 509u}) {
    GaloisField F(FieldSpec::prime(r));
    for (std::uint32_t a = 0; a < r; a += (r > 20 ? 7 : 1))
      for (std::uint32_t b = 0; b < r; b += (r > 20 ? 5 : 1)) {
        EXPECT_EQ(F.mul(F.element(a), F.element(b)).code, a * b % r);
        EXPECT_EQ(F.add(F.element(a), F.element(b)).code, (a + b) % r);
      }
  }
}

TEST(FieldOps, InverseOfZeroIsDomainError) {
  GaloisField F(FieldSpec::of_order(8));
  EXPECT_THROW(F.inv(F.zero()), std::domain_error);
}

TEST(FieldOps, OutOfRangeElementRejected) {
  GaloisField F(FieldSpec::prime(5));
  EXPECT_THROW(F.element(5), std::domain_error);
}

TEST(FieldOps, EveryNonzeroInverseAndFrobenius) {
  for (auto q : orders()) {
    GaloisField F(FieldSpec::of_order(q));
    for (std::uint32_t a = 0; a < q; ++a) {
      const FieldElement e = F.element(a);
      if (a != 0) EXPECT_EQ(F.mul(e, F.inv(e)), F.one()) << "q=" << q << " a=" << a;
      EXPECT_EQ(F.pow(e, q), e) << "q=" << q << " a=" << a;
    }
  }
}

TEST(FieldOps, AddAndMulCommuteAndDistribute) {
  GaloisField F(FieldSpec::of_order(27));
  for (std::uint32_t a = 0; a < 27; a += 2)
    for (std::uint32_t b = 0; b < 27; b += 3)
      for (std::uint32_t c = 0; c < 27; c += 5) {
        const auto A = F.element(a), B = F.element(b), C = F.element(c);
        EXPECT_EQ(F.add(A, B), F.add(B, A));
        EXPECT_EQ(F.mul(A, B), F.mul(B, A));
        EXPECT_EQ(F.mul(A, F.add(B, C)), F.add(F.mul(A, B), F.mul(A, C)));
        EXPECT_EQ(F.sub(F.add(A, B), B), A);
      }
}

TEST(FieldSpecs, InvalidOrdersRejected) {
  EXPECT_THROW(FieldSpec::of_order(6), std::domain_error);
  EXPECT_THROW(FieldSpec::of_order(1), std::domain_error);
  EXPECT_THROW(FieldSpec::of_order(1024), capacity_error);
}

TEST(FieldSpecs, NonIrreducibleModulusRejected) {
  FieldSpec bad{3, 2, {2, 0, 1}};  // x^2 + 2 = (x - 1)(x + 1) over GF(3)
  EXPECT_THROW(GaloisField{bad}, std::domain_error);
}

TEST(FindIrreducible, SpecExamples) {
  EXPECT_EQ(find_irreducible(3, 2), (std::vector<std::uint32_t>{1, 0, 1}));
  EXPECT_EQ(find_irreducible(2, 1), (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(find_irreducible(2, 2), (std::vector<std::uint32_t>{1, 1, 1}));
  EXPECT_EQ(find_irreducible(2, 3), (std::vector<std::uint32_t>{1, 1, 0, 1}));
}

TEST(FindIrreducible, CapacityLimit) {
  EXPECT_THROW(find_irreducible(2, 10), capacity_error);
  EXPECT_THROW(find_irreducible(4, 2), std::domain_error);
}

TEST(FindIrreducible, NoRootsAndDeterministic) {
  for (std::uint32_t r : {2u, 3u, 5u, 7u})
    for (std::uint32_t k = 2; k <= 4; ++k) {
      if (detail::checked_power(r, k, 1u << 20) > kMaxFieldOrder) continue;
      const auto f = find_irreducible(r, k);
      EXPECT_EQ(f, find_irreducible(r, k));
      ASSERT_EQ(f.size(), k + 1);
      EXPECT_EQ(f.back(), 1u);
      for (std::uint32_t y = 0; y < r; ++y) {
        std::uint64_t v = 0;
        for (std::size_t i = f.size(); i-- > 0;) v = (v * y + f[i]) % r;
        EXPECT_NE(v, 0u) << "root " << y << " for r=" << r << " k=" << k;
      }
    }
}

TEST(FindIrreducible, LexSmallestAmongIrreducibles) {
  // Over GF(3), the monic quadratics below x^2 + 1 in the search order are
  // x^2 (root 0) and x^2 + 2 (roots 1, 2).
  GaloisField F(FieldSpec::prime(3));
  EXPECT_FALSE(poly_is_irreducible(F, P(F, {0, 0, 1})));
  EXPECT_FALSE(poly_is_irreducible(F, P(F, {2, 0, 1})));
  EXPECT_TRUE(poly_is_irreducible(F, P(F, {1, 0, 1})));
}

TEST(FieldPolys, CanonicalForm) {
  GaloisField F(FieldSpec::prime(5));
  EXPECT_TRUE(P(F, {0, 0, 0}).is_zero());
  EXPECT_EQ(P(F, {1, 2, 0, 0}).degree(), 1);
  EXPECT_EQ(P(F, {}).degree(), -1);
}

TEST(PolyEval, Examples) {
  GaloisField F(FieldSpec::prime(3));
  EXPECT_EQ(poly_eval(F, P(F, {1, 1}), F.element(2)), F.zero());
  for (std::uint32_t y = 0; y < 3; ++y) {
    EXPECT_EQ(poly_eval(F, FieldPoly::constant(F.element(2)), F.element(y)), F.element(2));
    EXPECT_EQ(poly_eval(F, FieldPoly{}, F.element(y)), F.zero());
  }
}

TEST(PolyModPow, Examples) {
  GaloisField F(FieldSpec::prime(3));
  const FieldPoly E = P(F, {1, 0, 1});
  const FieldPoly x = P(F, {0, 1});
  EXPECT_EQ(poly_mod_pow(F, x, 2, E), FieldPoly::constant(F.element(2)));
  const FieldPoly f = P(F, {2, 1, 1, 2});  // degree above deg E
  EXPECT_EQ(poly_mod_pow(F, f, 1, E), poly_mod(F, f, E));
  for (std::uint64_t e : {0u, 1u, 5u, 100u})
    EXPECT_EQ(poly_mod_pow(F, FieldPoly::constant(F.one()), e, E), FieldPoly::constant(F.one()));
}

TEST(PolyModPow, ModulusMustBeMonicNonConstant) {
  GaloisField F(FieldSpec::prime(3));
  const FieldPoly x = P(F, {0, 1});
  EXPECT_THROW(poly_mod_pow(F, x, 2, P(F, {1, 0, 2})), std::domain_error);
  EXPECT_THROW(poly_mod_pow(F, x, 2, P(F, {1})), std::domain_error);
  EXPECT_THROW(poly_mod_pow(F, x, 2, FieldPoly{}), std::domain_error);
}

TEST(PolyModPow, ExponentsCompose) {
  GaloisField F(FieldSpec::of_order(8));
  const FieldPoly E = find_irreducible(F, 3);
  ASSERT_TRUE(poly_is_irreducible(F, E));
  for (std::uint64_t idx = 0; idx < 512; idx += 37) {
    const FieldPoly f = poly_from_index(F, idx, 3);
    for (std::uint64_t e1 : {2u, 3u, 7u})
      for (std::uint64_t e2 : {3u, 5u, 11u})
        EXPECT_EQ(poly_mod_pow(F, f, e1 * e2, E), poly_mod_pow(F, poly_mod_pow(F, f, e1, E), e2, E));
  }
}

TEST(PolyModPow, AgreesWithRepeatedMultiplication) {
  GaloisField F(FieldSpec::of_order(5));
  const FieldPoly E = find_irreducible(F, 2);
  for (std::uint64_t idx = 0; idx < 25; ++idx) {
    const FieldPoly f = poly_from_index(F, idx, 2);
    FieldPoly acc = FieldPoly::constant(F.one());
    for (std::uint64_t e = 0; e <= 12; ++e) {
      EXPECT_EQ(poly_mod_pow(F, f, e, E), acc);
      acc = poly_mod(F, poly_mul(F, acc, f), E);
    }
  }
}

TEST(FieldPolys, FromIndexUsesBaseQDigits) {
  GaloisField F(FieldSpec::prime(3));
  EXPECT_EQ(poly_from_index(F, 3, 2), P(F, {0, 1}));  // x
  EXPECT_EQ(poly_from_index(F, 4, 2), P(F, {1, 1}));  // x + 1
  EXPECT_EQ(poly_from_index(F, 0, 2), FieldPoly{});
}
