#pragma once
// Exact integer arithmetic: primality, factorization, Kronecker symbol.
#include <gmpxx.h>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace finemu {

using Int = mpz_class;
using Rat = mpq_class;

// Raised when an input is outside the supported working range (degree caps,
// precision guards, modulus limits).  The CLI maps it to its own exit code.
struct capability_error : std::runtime_error {
  explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an internal consistency check fails (should never happen on
// valid inputs).
struct invariant_error : std::logic_error {
  explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

inline Int to_int(long v) { return Int(v); }
Int pow_int(const Int& base, unsigned long e);
long to_long_checked(const Int& v, const char* what);

// Kronecker symbol (a|n), full extension (n may be even, negative, zero).
int kronecker(const Int& a, const Int& n);

bool is_prime(const Int& n);

// n -> sign (+1/-1) and sorted prime->exponent map.  n == 0 is an error.
struct Factorization {
  int sign = 1;
  std::map<Int, unsigned long> exponents;
  Int value() const;
};
Factorization factorize(const Int& n);

// Squarefree kernel of |n| (product of primes with odd exponent).
Int squarefree_kernel(const Int& n);
bool is_squarefree(const Int& n);

// Multiplicative order of a modulo m (gcd(a,m)=1), exhaustive; m small.
unsigned long mult_order(const Int& a, const Int& m);

// v_p(n) for n != 0.
unsigned long valuation(const Int& n, const Int& p);

// Deterministic xorshift-style generator for reproducible randomized tests.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next();
  // uniform in [0, bound)
  std::uint64_t below(std::uint64_t bound);
  long range(long lo, long hi);  // inclusive
};

// Primes below 10^6, ascending (sieve computed once).
const std::vector<std::uint32_t>& small_primes();

// Modular helpers on machine words (l < 2^62).
std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t m);
// Square root mod odd prime l, or -1 if a is a non-residue (Tonelli-Shanks).
std::int64_t sqrtmod_u64(std::uint64_t a, std::uint64_t l);

}  // namespace finemu
