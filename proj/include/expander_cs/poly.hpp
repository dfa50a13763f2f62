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
#include <stdexcept>
#include <string>
#include <vector>

#include "expander_cs/errors.hpp"
#include "expander_cs/field.hpp"

namespace xcs {

// Polynomial over GF(q), constant term first, no trailing zero
// coefficients. The empty coefficient list is the zero polynomial.
class FieldPoly {
 public:
  FieldPoly() = default;
  explicit FieldPoly(std::vector<FieldElement> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static FieldPoly constant(FieldElement c) { return FieldPoly({c}); }
  static FieldPoly monomial(FieldElement c, std::size_t power) {
    std::vector<FieldElement> v(power + 1);
    v[power] = c;
    return FieldPoly(std::move(v));
  }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<FieldElement>& coefficients() const noexcept { return coeffs_; }
  FieldElement operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : FieldElement{}; }
  FieldElement leading() const { return coeffs_.empty() ? FieldElement{} : coeffs_.back(); }

  friend bool operator==(const FieldPoly&, const FieldPoly&) = default;

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().code == 0) coeffs_.pop_back();
  }
  std::vector<FieldElement> coeffs_;
};

inline FieldPoly poly_add(const GaloisField& F, const FieldPoly& f, const FieldPoly& g) {
  std::vector<FieldElement> out(std::max(f.coefficients().size(), g.coefficients().size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = F.add(f[i], g[i]);
  return FieldPoly(std::move(out));
}

inline FieldPoly poly_mul(const GaloisField& F, const FieldPoly& f, const FieldPoly& g) {
  if (f.is_zero() || g.is_zero()) return {};
  const auto& a = f.coefficients();
  const auto& b = g.coefficients();
  std::vector<FieldElement> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
  return FieldPoly(std::move(out));
}

inline FieldPoly poly_mod(const GaloisField& F, const FieldPoly& f, const FieldPoly& divisor) {
  if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
  auto rem = f.coefficients();
  const auto& d = divisor.coefficients();
  const FieldElement lead_inv = F.inv(divisor.leading());
  while (!rem.empty() && rem.size() >= d.size()) {
    const FieldElement c = F.mul(rem.back(), lead_inv);
    const std::size_t shift = rem.size() - d.size();
    for (std::size_t i = 0; i < d.size(); ++i) rem[shift + i] = F.sub(rem[shift + i], F.mul(c, d[i]));
    while (!rem.empty() && rem.back().code == 0) rem.pop_back();
  }
  return FieldPoly(std::move(rem));
}

// Horner evaluation.
inline FieldElement poly_eval(const GaloisField& F, const FieldPoly& f, FieldElement y) {
  FieldElement acc = F.zero();
  const auto& c = f.coefficients();
  for (std::size_t i = c.size(); i-- > 0;) acc = F.add(F.mul(acc, y), c[i]);
  return acc;
}

// f^e mod E by square-and-multiply, reducing after every product.
inline FieldPoly poly_mod_pow(const GaloisField& F, const FieldPoly& f, std::uint64_t e, const FieldPoly& E) {
  if (E.degree() < 1 || E.leading() != F.one())
    throw std::domain_error("modulus must be monic of degree >= 1");
  FieldPoly result = FieldPoly::constant(F.one());
  FieldPoly base = poly_mod(F, f, E);
  for (; e > 0; e >>= 1) {
    if (e & 1) result = poly_mod(F, poly_mul(F, result, base), E);
    if (e > 1) base = poly_mod(F, poly_mul(F, base, base), E);
  }
  return poly_mod(F, result, E);
}

// Polynomial of degree < length whose coefficients are the base-q digits of
// `index`, constant digit least significant.
inline FieldPoly poly_from_index(const GaloisField& F, std::uint64_t index, std::size_t length) {
  std::vector<FieldElement> c(length);
  for (auto& v : c) {
    v = FieldElement{static_cast<std::uint32_t>(index % F.order())};
    index /= F.order();
  }
  return FieldPoly(std::move(c));
}

inline bool poly_is_irreducible(const GaloisField& F, const FieldPoly& f) {
  const long deg = f.degree();
  if (deg < 1) return false;
  for (long k = 1; 2 * k <= deg; ++k) {
    const std::uint64_t count = detail::checked_power(F.order(), static_cast<std::uint32_t>(k), std::uint64_t{1} << 24);
    for (std::uint64_t code = 0; code < count; ++code) {
      auto divisor = poly_add(F, poly_from_index(F, code, static_cast<std::size_t>(k)),
                              FieldPoly::monomial(F.one(), static_cast<std::size_t>(k)));
      if (poly_mod(F, f, divisor).is_zero()) return false;
    }
  }
  return true;
}

// Smallest monic irreducible polynomial of degree k over GF(q), candidates
// ordered as in find_irreducible(r, k).
inline FieldPoly find_irreducible(const GaloisField& F, std::uint32_t k, std::uint64_t limit = std::uint64_t{1} << 20) {
  if (k < 1) throw std::domain_error("degree must be at least 1");
  const std::uint64_t count = detail::checked_power(F.order(), k, limit);
  const auto lead = FieldPoly::monomial(F.one(), k);
  for (std::uint64_t code = 0; code < count; ++code) {
    auto f = poly_add(F, poly_from_index(F, code, k), lead);
    if (poly_is_irreducible(F, f)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");  // unreachable
}

inline std::string to_string(const GaloisField& F, const FieldPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  const auto& c = f.coefficients();
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i].code == 0) continue;
    if (!out.empty()) out += " + ";
    const bool unit = c[i].code == 1;
    if (i == 0 || !unit) {
      if (F.degree() == 1) {
        out += std::to_string(c[i].code);
      } else {
        out += "[";
        const auto digits = F.coefficients(c[i]);
        for (std::size_t j = 0; j < digits.size(); ++j) out += (j ? "," : "") + std::to_string(digits[j]);
        out += "]";
      }
    }
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

}  // namespace xcs
