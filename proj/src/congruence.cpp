#include "finemu/congruence.hpp"

#include <stdexcept>

namespace finemu {

const char* to_string(CongruenceStatus s) {
  switch (s) {
    case CongruenceStatus::Congruent: return "Congruent";
    case CongruenceStatus::NotCongruent: return "NotCongruent";
    case CongruenceStatus::Inconclusive: return "Inconclusive";
  }
  throw invariant_error("unhandled congruence status");
}

Int sturm_bound(const Int& n1, const Int& n2) {
  if (n1 < 1 || n2 < 1) throw std::domain_error("sturm_bound: levels must be positive");
  Int L = lcm(n1, n2);
  // index = L * prod_{ell | L} (1 + 1/ell), an integer; assemble it as an
  // exact fraction before dividing.
  Int num = L;
  Int den = 1;
  for (const auto& [q, e] : factorize(L).exponents) {
    (void)e;
    num *= q + 1;
    den *= q;
  }
  Int index = num / den;
  return (index + 5) / 6;
}

namespace {

constexpr const char* kCongruentCaveat =
    "semisimple-isomorphism certified; full isomorphism assumed per design decision";

int multiplicative_sign(ReductionType r) {
  return r == ReductionType::SplitMult ? 1 : -1;
}

}  // namespace

CongruenceVerdict is_p_congruent(const Curve& e1, const Curve& e2, const Int& p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw std::domain_error("is_p_congruent: p must be an odd prime");

  Curve m1 = minimal_model(e1);
  Curve m2 = minimal_model(e2);
  Int n1 = conductor(m1);
  Int n2 = conductor(m2);

  CongruenceVerdict v;
  v.p = p;
  v.boundUsed = sturm_bound(n1, n2);
  if (v.boundUsed >= Int(1000000))
    throw capability_error("is_p_congruent: Sturm bound exceeds the prime table");

  for (std::uint32_t ell32 : small_primes()) {
    Int ell(ell32);
    if (ell > v.boundUsed) break;
    bool good1 = n1 % ell != 0;
    bool good2 = n2 % ell != 0;

    if (good1 && good2) {
      Int a1 = ap(m1, ell);
      Int a2 = ap(m2, ell);
      ++v.checkedPrimes;
      if ((a1 - a2) % p != 0) {
        v.status = CongruenceStatus::NotCongruent;
        v.witness = ell;
        return v;
      }
      continue;
    }
    if (!good1 && !good2) continue;  // no comparable trace on either side

    // Exactly one curve is bad at ell.  If that curve is multiplicative,
    // the trace of Frobenius on its semisimplified mod-p representation is
    // eps*(1 + ell); compare against the good curve's a_ell.  Additive
    // reduction (and ell = p, where Frobenius traces are not the right
    // local invariant) is skipped.
    if (ell == p) continue;
    const Curve& bad = good1 ? m2 : m1;
    const Curve& good = good1 ? m1 : m2;
    LocalData L = tate_local_data(bad, ell);
    if (L.reduction == ReductionType::Additive) continue;
    Int expected = Int(multiplicative_sign(L.reduction)) * (ell + 1);
    Int agood = ap(good, ell);
    ++v.checkedPrimes;
    if ((agood - expected) % p != 0) {
      v.status = CongruenceStatus::NotCongruent;
      v.caveat = "semisimple-trace compatibility failed at a prime of mixed reduction";
      return v;
    }
  }

  v.status = CongruenceStatus::Congruent;
  v.caveat = kCongruentCaveat;
  return v;
}

}  // namespace finemu
