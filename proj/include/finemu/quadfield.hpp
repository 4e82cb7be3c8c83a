#pragma once
// Imaginary quadratic fields K = Q(sqrt(-d)): discriminant, prime splitting,
// class numbers, local roots of unity, anticyclotomic decomposition type,
// plus exact arithmetic in K and K[x] (including factorization of rational
// polynomials over K by the norm method).
#include "finemu/arith.hpp"
#include "finemu/poly.hpp"

#include <optional>
#include <vector>

namespace finemu {

struct QuadField {
  Int d;     // squarefree, > 0: the field is Q(sqrt(-d))
  Int disc;  // field discriminant: -d if d % 4 == 3, else -4d

  // Accepts any positive integer whose squarefree kernel defines the field
  // (e.g. 8 normalizes to 2).
  explicit QuadField(const Int& d_in);
  Int m() const { return -d; }  // K = Q(sqrt(m)), m < 0
};

enum class SplitType { Split, Inert, Ramified };
const char* to_string(SplitType t);

SplitType splitting_type(const QuadField& K, const Int& ell);

// The Galois orbit of primes above a rational prime: e*f*g = 2.
struct PrimeOfK {
  Int ell;         // residue characteristic
  SplitType type;
  int e;           // ramification index
  int f;           // residue degree
  int g;           // number of primes above ell
};
PrimeOfK prime_above(const QuadField& K, const Int& ell);

// Class number by exhaustive enumeration of reduced binary quadratic forms
// (a,b,c) of discriminant disc(K): b^2-4ac = disc, |b| <= a <= c, with
// b >= 0 when |b| = a or a = c.  Memoized.
unsigned long class_number(const QuadField& K);

// Whether the completion K_v contains the p-th roots of unity, for v not
// above p: true iff ell^f == 1 mod p (Hensel lift from the residue field).
// Throws std::domain_error when v lies above p.
bool mu_p_in_completion(const PrimeOfK& v, const Int& p);

enum class DecompType { Finite, Infinite };
// Behavior of v in the anticyclotomic tower: Finite iff v | p or v splits.
DecompType anticyclotomic_decomposition(const PrimeOfK& v, const Int& p);

// ----------------------------------------------------------------- K itself

// Element a + b*sqrt(m) of K = Q(sqrt(m)); m is carried by context.
struct QuadElem {
  Rat a, b;
  bool is_zero() const { return a == 0 && b == 0; }
  bool is_rational() const { return b == 0; }
  bool operator==(const QuadElem& o) const { return a == o.a && b == o.b; }
};

QuadElem q_add(const QuadElem& x, const QuadElem& y);
QuadElem q_sub(const QuadElem& x, const QuadElem& y);
QuadElem q_mul(const QuadElem& x, const QuadElem& y, const Int& m);
QuadElem q_inv(const QuadElem& x, const Int& m);
QuadElem q_conj(const QuadElem& x);
QuadElem q_from_rat(const Rat& r);

// Exact squareness tests.
bool is_square_rat(const Rat& r);                   // r >= 0 and num, den squares
std::optional<Rat> sqrt_rat(const Rat& r);          // exact square root if it exists
bool is_square_in_K(const QuadField& K, const Rat& q);
bool is_square_elem_K(const QuadField& K, const QuadElem& z);
// Exact square root in K of a K-element, if one exists.
std::optional<QuadElem> sqrt_in_K(const QuadField& K, const QuadElem& z);

// ------------------------------------------------------------------- K[x]

// Polynomial with coefficients in Q(sqrt(m)); lowest-degree first.
struct PolyK {
  Int m;  // the field: K = Q(sqrt(m)), m squarefree negative
  std::vector<QuadElem> c;

  PolyK() = default;
  PolyK(const Int& m_in, std::vector<QuadElem> coeffs);
  static PolyK from_q(const Int& m, const PolyQ& p);
  static PolyK from_z(const Int& m, const PolyZ& p);

  int degree() const { return int(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  QuadElem lc() const { return c.empty() ? QuadElem{} : c.back(); }
  void normalize();
  bool is_rational() const;
  PolyQ rational_part() const;  // requires is_rational()

  PolyK operator+(const PolyK& o) const;
  PolyK operator-(const PolyK& o) const;
  PolyK operator*(const PolyK& o) const;
  bool operator==(const PolyK& o) const;

  PolyK conj() const;   // Galois conjugate (coefficient-wise)
  PolyK monic() const;
  QuadElem evaluate(const QuadElem& x) const;
  std::string str() const;
};

void divmod_k(const PolyK& dividend, const PolyK& divisor, PolyK* q, PolyK* r);
PolyK gcd_k(const PolyK& a, const PolyK& b);  // monic
PolyK mulmod_k(const PolyK& a, const PolyK& b, const PolyK& mod);
// Inverse of a mod h in K[x]/(h); empty optional if gcd(a,h) != 1.
std::optional<PolyK> invmod_k(const PolyK& a, const PolyK& h);
// Evaluate f at the class of u in K[x]/(h).
PolyK compose_mod_k(const PolyK& f, const PolyK& u, const PolyK& h);

// Factor a Q-irreducible polynomial over K: returns either {g} (still
// irreducible) or the two conjugate irreducible halves (norm method with a
// squarefree shift).
std::vector<PolyK> factor_irreducible_over_K(const QuadField& K, const PolyZ& g);

}  // namespace finemu
