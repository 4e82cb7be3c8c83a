#pragma once
// Exact univariate polynomial arithmetic over Z, Q and F_l, with complete
// factorization over F_l (Cantor-Zassenhaus) and over Q (Hensel + Zassenhaus).
#include "finemu/arith.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace finemu {

// Coefficients lowest-degree first; no trailing zeros (zero poly = empty).
struct PolyZ {
  std::vector<Int> c;

  PolyZ() = default;
  explicit PolyZ(std::vector<Int> coeffs);
  static PolyZ from_longs(const std::vector<long>& coeffs);
  static PolyZ x_power(std::size_t k, const Int& lead = 1);

  int degree() const { return int(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  const Int& coeff(std::size_t i) const;
  Int lc() const { return c.empty() ? Int(0) : c.back(); }
  void normalize();

  PolyZ operator-() const;
  PolyZ operator+(const PolyZ& o) const;
  PolyZ operator-(const PolyZ& o) const;
  PolyZ operator*(const PolyZ& o) const;
  PolyZ operator*(const Int& k) const;
  bool operator==(const PolyZ& o) const { return c == o.c; }

  PolyZ derivative() const;
  Int evaluate(const Int& x) const;
  Int content() const;          // gcd of coefficients, >= 0 (0 for zero poly)
  PolyZ primitive_part() const; // content removed, sign of lc preserved
  Int max_abs_coeff() const;
  std::string str() const;      // human-readable, highest degree first
};

// Exact division test: if divisor | dividend in Z[x], set quotient and return true.
bool divides(const PolyZ& divisor, const PolyZ& dividend, PolyZ* quotient = nullptr);

struct PolyQ {
  std::vector<Rat> c;  // lowest-degree first, no trailing zeros

  PolyQ() = default;
  explicit PolyQ(std::vector<Rat> coeffs);
  static PolyQ from_z(const PolyZ& p);

  int degree() const { return int(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  Rat lc() const { return c.empty() ? Rat(0) : c.back(); }
  void normalize();

  PolyQ operator+(const PolyQ& o) const;
  PolyQ operator-(const PolyQ& o) const;
  PolyQ operator*(const PolyQ& o) const;
  PolyQ operator*(const Rat& k) const;
  bool operator==(const PolyQ& o) const { return c == o.c; }

  PolyQ monic() const;
  Rat evaluate(const Rat& x) const;
  // Clear denominators: returns primitive integer polynomial with the same roots.
  PolyZ primitive_z() const;
};

// Euclidean division over Q: dividend = q * divisor + r, deg r < deg divisor.
void divmod_q(const PolyQ& dividend, const PolyQ& divisor, PolyQ* q, PolyQ* r);
PolyQ gcd_q(const PolyQ& a, const PolyQ& b);  // monic gcd
// Extended gcd: g = s*a + t*b, g monic (or zero).
PolyQ xgcd_q(const PolyQ& a, const PolyQ& b, PolyQ* s, PolyQ* t);

// Dense polynomial over F_l, l < 2^31 prime; coefficients in [0, l).
struct PolyFp {
  std::uint64_t l = 0;
  std::vector<std::uint64_t> c;

  PolyFp() = default;
  PolyFp(std::uint64_t mod, std::vector<std::uint64_t> coeffs);
  static PolyFp reduce(const PolyZ& p, std::uint64_t mod);
  static PolyFp x_power(std::uint64_t mod, std::size_t k);

  int degree() const { return int(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  std::uint64_t lc() const { return c.empty() ? 0 : c.back(); }
  void normalize();

  PolyFp operator+(const PolyFp& o) const;
  PolyFp operator-(const PolyFp& o) const;
  PolyFp operator*(const PolyFp& o) const;
  bool operator==(const PolyFp& o) const { return l == o.l && c == o.c; }

  PolyFp monic() const;
  std::uint64_t evaluate(std::uint64_t x) const;
  PolyFp derivative() const;
  std::string str() const;
};

void divmod_fp(const PolyFp& dividend, const PolyFp& divisor, PolyFp* q, PolyFp* r);
PolyFp gcd_fp(PolyFp a, PolyFp b);  // monic
PolyFp mulmod_fp(const PolyFp& a, const PolyFp& b, const PolyFp& mod);
PolyFp powmod_fp(const PolyFp& base, const Int& e, const PolyFp& mod);

// Complete factorization over F_l (monic factors with multiplicity, sorted).
struct FpFactor {
  PolyFp factor;
  unsigned multiplicity;
};
std::vector<FpFactor> factor_poly_fp(const PolyFp& f);
// Roots in F_l, sorted ascending.
std::vector<std::uint64_t> roots_fp(const PolyFp& f);
bool is_squarefree_fp(const PolyFp& f);

// Factorization over Q of a nonzero integer polynomial:
// f = content * prod factor[i]^mult[i], factors primitive with positive lc,
// irreducible over Q, sorted deterministically.
struct ZFactor {
  PolyZ factor;
  unsigned multiplicity;
};
struct ZFactorization {
  Rat content;  // includes sign
  std::vector<ZFactor> factors;
};
ZFactorization factor_poly_q(const PolyZ& f);
ZFactorization factor_poly_q(const PolyQ& f);

// Partial factorization of a squarefree polynomial: extracts every irreducible
// factor of degree <= maxdeg; the product of all higher-degree irreducible
// factors is returned unfactored as `cofactor` (primitive, positive leading
// coefficient; the constant 1 when nothing remains).  Much cheaper than full
// factorization when the interesting factors are small and the polynomial is
// large.  Throws invariant_error if the input is not squarefree.
struct BoundedFactorization {
  Rat content;                 // includes sign
  std::vector<PolyZ> factors;  // irreducible, primitive, positive lc, sorted
  PolyZ cofactor;
};
BoundedFactorization factor_upto_degree(const PolyZ& f, int maxdeg);

}  // namespace finemu
