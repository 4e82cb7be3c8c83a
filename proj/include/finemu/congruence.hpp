#pragma once
// Desk-scale p-congruence testing for pairs of elliptic curves: decide
// whether E1[p] and E2[p] are isomorphic as Galois modules by comparing
// traces of Frobenius up to an explicit Sturm-type bound.
#include "finemu/arith.hpp"
#include "finemu/ellcurve.hpp"

#include <optional>
#include <string>

namespace finemu {

// Sturm-type bound for comparing weight-2 eigenform traces at level
// L = lcm(n1, n2): ceil(index / 6) with index = L * prod_{ell | L} (1 + 1/ell)
// (the index of the level-L congruence subgroup in the modular group).
Int sturm_bound(const Int& n1, const Int& n2);

enum class CongruenceStatus { Congruent, NotCongruent, Inconclusive };
const char* to_string(CongruenceStatus s);

struct CongruenceVerdict {
  CongruenceStatus status = CongruenceStatus::Inconclusive;
  Int p;
  Int boundUsed;
  // A prime of good reduction for both curves where the traces disagree
  // mod p; present exactly when such a prime caused the NotCongruent status.
  std::optional<Int> witness;
  // Number of primes at which a comparison was actually performed.
  unsigned long checkedPrimes = 0;
  // Certification-scope note: set on every Congruent verdict, and on a
  // NotCongruent verdict triggered by a mixed-reduction compatibility check.
  std::string caveat;
};

// Trace-congruence test: for every prime ell up to sturm_bound of the two
// conductors, compare a_ell(E1) and a_ell(E2) mod p where both curves have
// good reduction; where exactly one curve is multiplicative, check the
// semisimple-trace compatibility a_ell(good curve) = eps * (ell + 1) mod p
// with eps = +1/-1 for split/nonsplit reduction.  Primes bad for both
// curves, and primes where the single bad curve is additive, are skipped.
// Any mismatch yields NotCongruent; a full pass yields Congruent carrying
// an explicit caveat that only the semisimplifications are certified.
// p must be an odd prime (std::domain_error otherwise); a bound beyond the
// prime table throws capability_error.
CongruenceVerdict is_p_congruent(const Curve& e1, const Curve& e2, const Int& p);

}  // namespace finemu
