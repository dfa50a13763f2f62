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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "expander_cs/errors.hpp"

namespace xcs {

// Largest field order the tables are built for.
inline constexpr std::uint32_t kMaxFieldOrder = 512;

namespace detail {

inline bool is_prime(std::uint32_t r) {
  if (r < 2) return false;
  for (std::uint32_t f = 2; f * f <= r; ++f)
    if (r % f == 0) return false;
  return true;
}

inline std::uint64_t checked_power(std::uint64_t base, std::uint32_t exp, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (base != 0 && v > limit / base) throw capacity_error("power exceeds configured limit");
    v *= base;
  }
  return v;
}

// Polynomials over Z/rZ as coefficient vectors, constant term first.
using PrimePoly = std::vector<std::uint32_t>;

inline void trim(PrimePoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t r) {
  // r is prime: a^(r-2).
  std::uint64_t result = 1, base = a % r;
  for (std::uint32_t e = r - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % r;
    base = base * base % r;
  }
  return static_cast<std::uint32_t>(result);
}

inline PrimePoly remainder(PrimePoly num, PrimePoly den, std::uint32_t r) {
  trim(num);
  trim(den);
  if (den.empty()) throw std::domain_error("polynomial division by zero");
  const std::uint32_t lead_inv = inv_mod(den.back(), r);
  while (num.size() >= den.size()) {
    const std::uint64_t c = static_cast<std::uint64_t>(num.back()) * lead_inv % r;
    const std::size_t shift = num.size() - den.size();
    for (std::size_t i = 0; i < den.size(); ++i) {
      const std::uint64_t sub = c * den[i] % r;
      num[shift + i] = static_cast<std::uint32_t>((num[shift + i] + r - sub) % r);
    }
    trim(num);
  }
  return num;
}

// Monic polynomial of the given degree whose lower coefficients are the
// base-r digits of `code` (constant digit least significant).
inline PrimePoly monic_from_code(std::uint64_t code, std::uint32_t degree, std::uint32_t r) {
  PrimePoly f(degree + 1, 0);
  for (std::uint32_t i = 0; i < degree; ++i) {
    f[i] = static_cast<std::uint32_t>(code % r);
    code /= r;
  }
  f[degree] = 1;
  return f;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible(const PrimePoly& f, std::uint32_t r) {
  PrimePoly g = f;
  trim(g);
  const auto degree = static_cast<std::uint32_t>(g.size()) - 1;
  if (g.size() < 2) return false;
  for (std::uint32_t k = 1; 2 * k <= degree; ++k) {
    const std::uint64_t count = checked_power(r, k, std::uint64_t{1} << 32);
    for (std::uint64_t code = 0; code < count; ++code)
      if (remainder(g, monic_from_code(code, k, r), r).empty()) return false;
  }
  return true;
}

}  // namespace detail

// Lexicographically smallest monic irreducible polynomial of degree k over
// GF(r). Candidates are visited in increasing order of their lower
// coefficients read as a base-r number with the x^{k-1} digit most
// significant, so (3, 2) gives x^2 + 1 and (2, 3) gives x^3 + x + 1.
// Coefficients are returned constant term first.
inline std::vector<std::uint32_t> find_irreducible(std::uint32_t r, std::uint32_t k) {
  if (!detail::is_prime(r)) throw std::domain_error("characteristic must be prime");
  if (k < 1) throw std::domain_error("degree must be at least 1");
  const std::uint64_t count = detail::checked_power(r, k, kMaxFieldOrder);
  for (std::uint64_t code = 0; code < count; ++code) {
    auto f = detail::monic_from_code(code, k, r);
    if (detail::is_irreducible(f, r)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");  // unreachable
}

// GF(r^k) in polynomial basis over GF(r).
struct FieldSpec {
  std::uint32_t characteristic = 2;
  std::uint32_t degree = 1;
  std::vector<std::uint32_t> modulus;  // monic, constant term first, size degree + 1

  std::uint32_t order() const {
    return static_cast<std::uint32_t>(detail::checked_power(characteristic, degree, kMaxFieldOrder));
  }

  static FieldSpec prime(std::uint32_t r) { return FieldSpec{r, 1, {0, 1}}; }

  static FieldSpec extension(std::uint32_t r, std::uint32_t k) {
    return FieldSpec{r, k, find_irreducible(r, k)};
  }

  // Splits q = r^k and picks the default modulus.
  static FieldSpec of_order(std::uint32_t q) {
    for (std::uint32_t r = 2; r <= q; ++r) {
      if (q % r != 0) continue;
      if (!detail::is_prime(r)) throw std::domain_error("field order must be a prime power");
      std::uint32_t k = 0, rest = q;
      while (rest % r == 0) rest /= r, ++k;
      if (rest != 1) throw std::domain_error("field order must be a prime power");
      return extension(r, k);
    }
    throw std::domain_error("field order must be a prime power");
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

// Field element stored as the base-r code of its coefficient vector
// (constant coefficient least significant); code < q.
struct FieldElement {
  std::uint32_t code = 0;
  friend auto operator<=>(const FieldElement&, const FieldElement&) = default;
};

class GaloisField {
 public:
  explicit GaloisField(FieldSpec spec) : spec_(std::move(spec)) {
    const auto r = spec_.characteristic;
    const auto k = spec_.degree;
    if (!detail::is_prime(r)) throw std::domain_error("characteristic must be prime");
    if (k < 1) throw std::domain_error("extension degree must be at least 1");
    q_ = spec_.order();
    if (spec_.modulus.size() != k + 1 || spec_.modulus.back() != 1)
      throw std::domain_error("modulus must be monic of the extension degree");
    for (auto c : spec_.modulus)
      if (c >= r) throw std::domain_error("modulus coefficient out of range");
    if (k > 1 && !detail::is_irreducible(spec_.modulus, r))
      throw std::domain_error("modulus is not irreducible");
    build_tables();
  }

  const FieldSpec& spec() const noexcept { return spec_; }
  std::uint32_t order() const noexcept { return q_; }
  std::uint32_t characteristic() const noexcept { return spec_.characteristic; }
  std::uint32_t degree() const noexcept { return spec_.degree; }

  FieldElement zero() const noexcept { return {0}; }
  FieldElement one() const noexcept { return {1}; }

  FieldElement element(std::uint32_t code) const {
    if (code >= q_) throw std::domain_error("field element out of range");
    return {code};
  }

  FieldElement from_coefficients(std::span<const std::uint32_t> coeffs) const {
    if (coeffs.size() != spec_.degree) throw std::domain_error("coefficient list must have length k");
    std::uint32_t code = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      if (coeffs[i] >= spec_.characteristic) throw std::domain_error("coefficient out of range");
      code = code * spec_.characteristic + coeffs[i];
    }
    return {code};
  }

  std::vector<std::uint32_t> coefficients(FieldElement a) const {
    std::vector<std::uint32_t> c(spec_.degree);
    for (auto& v : c) {
      v = a.code % spec_.characteristic;
      a.code /= spec_.characteristic;
    }
    return c;
  }

  FieldElement add(FieldElement a, FieldElement b) const { return {add_[index(a, b)]}; }
  FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }
  FieldElement neg(FieldElement a) const { check(a); return {neg_[a.code]}; }
  FieldElement mul(FieldElement a, FieldElement b) const { return {mul_[index(a, b)]}; }

  FieldElement inv(FieldElement a) const {
    check(a);
    if (a.code == 0) throw std::domain_error("inverse of zero");
    return {inv_[a.code]};
  }

  FieldElement pow(FieldElement a, std::uint64_t e) const {
    check(a);
    FieldElement result = one(), base = a;
    for (; e > 0; e >>= 1) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
    }
    return result;
  }

 private:
  void check(FieldElement a) const {
    if (a.code >= q_) throw std::domain_error("field element out of range");
  }

  std::size_t index(FieldElement a, FieldElement b) const {
    check(a);
    check(b);
    return static_cast<std::size_t>(a.code) * q_ + b.code;
  }

  void build_tables() {
    const auto r = spec_.characteristic;
    const auto k = spec_.degree;
    add_.resize(static_cast<std::size_t>(q_) * q_);
    mul_.resize(static_cast<std::size_t>(q_) * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    std::vector<std::vector<std::uint32_t>> coeff(q_);
    for (std::uint32_t a = 0; a < q_; ++a) coeff[a] = coefficients(FieldElement{a});
    auto encode = [&](const std::vector<std::uint32_t>& c) {
      std::uint32_t code = 0;
      for (std::size_t i = k; i-- > 0;) code = code * r + c[i];
      return code;
    };
    std::vector<std::uint32_t> sum(k);
    std::vector<std::uint32_t> prod(2 * k - 1);
    for (std::uint32_t a = 0; a < q_; ++a) {
      for (std::uint32_t i = 0; i < k; ++i) sum[i] = (r - coeff[a][i]) % r;
      neg_[a] = encode(sum);
      for (std::uint32_t b = 0; b < q_; ++b) {
        for (std::uint32_t i = 0; i < k; ++i) sum[i] = (coeff[a][i] + coeff[b][i]) % r;
        add_[static_cast<std::size_t>(a) * q_ + b] = encode(sum);
        std::fill(prod.begin(), prod.end(), 0);
        for (std::uint32_t i = 0; i < k; ++i)
          for (std::uint32_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + coeff[a][i] * coeff[b][j]) % r;
        for (std::uint32_t top = 2 * k - 1; top-- > k;) {
          const auto c = prod[top];
          if (c == 0) continue;
          for (std::uint32_t i = 0; i <= k; ++i) {
            auto& slot = prod[top - k + i];
            slot = (slot + r - (c * spec_.modulus[i]) % r) % r;
          }
        }
        mul_[static_cast<std::size_t>(a) * q_ + b] =
            encode(std::vector<std::uint32_t>(prod.begin(), prod.begin() + k));
      }
    }
    for (std::uint32_t a = 1; a < q_; ++a)
      for (std::uint32_t b = 1; b < q_; ++b)
        if (mul_[static_cast<std::size_t>(a) * q_ + b] == 1) {
          inv_[a] = b;
          break;
        }
  }

  FieldSpec spec_;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> add_, mul_, neg_, inv_;
};

}  // namespace xcs
