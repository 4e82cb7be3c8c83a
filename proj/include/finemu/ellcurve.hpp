#pragma once
// Elliptic curves over Q in long Weierstrass form: invariants, coordinate
// changes, global minimal models, Tate's algorithm (all primes, including 2
// and 3), conductors, traces of Frobenius, quadratic twists, and base change
// of local reduction data to an imaginary quadratic field.
#include "finemu/arith.hpp"
#include "finemu/quadfield.hpp"

#include <optional>
#include <string>
#include <vector>

namespace finemu {

struct Curve {
  Int a1, a2, a3, a4, a6;
  Int b2, b4, b6, b8, c4, c6, disc;

  Curve(const Int& a1_, const Int& a2_, const Int& a3_, const Int& a4_, const Int& a6_);
  static Curve from_ainvs(const std::vector<Int>& a);  // size 5: [a1,a2,a3,a4,a6]

  Rat j() const;
  std::string ainvs_str() const;  // "[a1,a2,a3,a4,a6]"
  bool same_equation(const Curve& o) const;
};

// Coordinate change x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.  Returns the
// transformed curve if it is integral, otherwise nullopt.
std::optional<Curve> transform(const Curve& E, const Rat& u, const Rat& r, const Rat& s,
                               const Rat& t);
// Integral change of variables (u nonzero): always defined.
Curve transform_z(const Curve& E, const Int& u, const Int& r, const Int& s, const Int& t);

// Canonical reduced global minimal model (scaling by the largest admissible u,
// then the standard reduction a1,a3 in {0,1}, a2 in {-1,0,1}).
Curve minimal_model(const Curve& E);

enum class ReductionType { Good, SplitMult, NonSplitMult, Additive };
const char* to_string(ReductionType t);

struct LocalData {
  Int ell;
  std::string kodaira;  // "I0", "I1", ..., "II", "III", "IV", "I0*", "I1*", ..., "IV*", "III*", "II*"
  unsigned long f = 0;        // conductor exponent
  ReductionType reduction = ReductionType::Good;
  unsigned long vdisc = 0;    // valuation of the minimal discriminant at ell
  long n = 0;                 // index for I_n / I_n* types, else 0
};

// Local reduction data at ell (the curve is globally minimized first).
LocalData tate_local_data(const Curve& E, const Int& ell);

Int conductor(const Curve& E);
std::vector<Int> bad_primes(const Curve& E);  // sorted primes dividing the minimal discriminant

// Trace of Frobenius at a good prime (domain_error on bad reduction).
Int ap(const Curve& E, const Int& ell);
// Exposed for cross-validation: exhaustive count (ell < 10^5) and
// baby-step/giant-step order computation (ell > 500).
Int ap_exhaustive(const Curve& E, const Int& ell);
Int ap_bsgs(const Curve& E, const Int& ell);

// Quadratic twist by squarefree-normalized d (result is a reduced minimal model).
Curve quadratic_twist(const Curve& E, const Int& d);

// Reduction data of E over the completion K_v for v above ell.  `known` is
// false exactly when the classification is out of working range (additive
// reduction at a ramified prime above 2 or 3).
struct LocalDataK {
  PrimeOfK v;
  bool known = false;
  ReductionType reduction = ReductionType::Good;
  std::string kodaira;        // best-effort label over K_v ("" when untracked)
  unsigned long f = 0;        // conductor exponent over K_v when known
  long n = 0;                 // I_n index over K_v for multiplicative reduction, else 0
};
LocalDataK local_data_over_K(const Curve& E, const QuadField& K, const Int& ell);

}  // namespace finemu
