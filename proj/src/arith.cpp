#include "finemu/arith.hpp"

#include <algorithm>

namespace finemu {

Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

long to_long_checked(const Int& v, const char* what) {
  if (!v.fits_slong_p()) throw capability_error(std::string(what) + ": value out of machine range");
  return v.get_si();
}

int kronecker(const Int& a, const Int& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

namespace {

// Deterministic Miller-Rabin witness set, valid for n < 3.317e24.
constexpr unsigned long kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool miller_rabin_witness(const Int& n, unsigned long a) {
  // n odd >= 3.  Returns true if a proves n composite.
  Int d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  d >>= s;
  Int x;
  Int base(a);
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n - 1) return false;
  for (unsigned long i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace

bool is_prime(const Int& n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (mpz_even_p(n.get_mpz_t())) return false;
  static const Int kDeterministicLimit("3317044064679887385961981");
  if (n < kDeterministicLimit) {
    for (unsigned long a : kMrBases) {
      if (n == a) return true;
      if (miller_rabin_witness(n, a)) return false;
    }
    return true;
  }
  return mpz_probab_prime_p(n.get_mpz_t(), 50) > 0;
}

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t kLimit = 1000000;
    std::vector<bool> sieve(kLimit + 1, true);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kLimit; ++i) {
      if (!sieve[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t(i) * i; j <= kLimit; j += i) sieve[j] = false;
    }
    return out;
  }();
  return primes;
}

namespace {

Int pollard_rho(const Int& n, SplitMix64& rng) {
  // Brent's cycle variant; n odd composite, no factor below 10^6.
  while (true) {
    Int c = Int(1 + long(rng.below(1 << 20)));
    Int y = Int(2 + long(rng.below(1 << 20)));
    Int x = y, q = 1, g = 1, ys = y;
    unsigned long r = 1, m = 128;
    auto step = [&](Int& v) { v = (v * v + c) % n; };
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      for (unsigned long k = 0; k < r && g == 1; k += m) {
        ys = y;
        unsigned long lim = std::min(m, r - k);
        for (unsigned long i = 0; i < lim; ++i) {
          step(y);
          Int diff = x - y;
          if (diff < 0) diff = -diff;
          q = (q * diff) % n;
          if (q == 0) q = 1;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      r *= 2;
      if (r > (1ul << 24)) break;
    }
    if (g == n) {
      // backtrack
      g = 1;
      while (g == 1) {
        step(ys);
        Int diff = x - ys;
        if (diff < 0) diff = -diff;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      }
    }
    if (g != n && g != 1) return g;
  }
}

void factor_into(Int n, std::map<Int, unsigned long>& out, SplitMix64& rng) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  Int d = pollard_rho(n, rng);
  factor_into(d, out, rng);
  factor_into(n / d, out, rng);
}

}  // namespace

Factorization factorize(const Int& n) {
  if (n == 0) throw capability_error("factorize: zero has no factorization");
  Factorization f;
  Int m = n;
  if (m < 0) {
    f.sign = -1;
    m = -m;
  }
  for (std::uint32_t p : small_primes()) {
    if (Int(p) * p > m) break;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      ++f.exponents[Int(p)];
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    }
  }
  if (m > 1) {
    if (is_prime(m)) {
      ++f.exponents[m];
    } else {
      SplitMix64 rng(0x9e3779b97f4a7c15ull);
      factor_into(m, f.exponents, rng);
    }
  }
  return f;
}

Int Factorization::value() const {
  Int v = sign;
  for (const auto& [p, e] : exponents) v *= pow_int(p, e);
  return v;
}

Int squarefree_kernel(const Int& n) {
  if (n == 0) throw capability_error("squarefree_kernel of zero");
  Int out = 1;
  for (const auto& [p, e] : factorize(n).exponents)
    if (e % 2 == 1) out *= p;
  return out;
}

bool is_squarefree(const Int& n) {
  if (n == 0) return false;
  for (const auto& [p, e] : factorize(n).exponents)
    if (e > 1) return false;
  return true;
}

unsigned long mult_order(const Int& a, const Int& m) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (g != 1) throw invariant_error("mult_order: arguments not coprime");
  Int x = a % m;
  if (x < 0) x += m;
  Int acc = x;
  unsigned long ord = 1;
  while (acc != 1) {
    acc = (acc * x) % m;
    ++ord;
    if (ord > 100000000ul) throw capability_error("mult_order: modulus too large");
  }
  return ord;
}

unsigned long valuation(const Int& n, const Int& p) {
  if (n == 0) throw invariant_error("valuation of zero");
  Int m = n;
  unsigned long v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) throw invariant_error("SplitMix64::below(0)");
  return next() % bound;
}

long SplitMix64::range(long lo, long hi) {
  return lo + long(below(std::uint64_t(hi - lo + 1)));
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return std::uint64_t((unsigned __int128)a * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, nt = 1;
  std::int64_t r = std::int64_t(m), nr = std::int64_t(a % m);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  if (r != 1) throw invariant_error("invmod_u64: not invertible");
  if (t < 0) t += std::int64_t(m);
  return std::uint64_t(t);
}

std::int64_t sqrtmod_u64(std::uint64_t a, std::uint64_t l) {
  a %= l;
  if (l == 2) return std::int64_t(a);
  if (a == 0) return 0;
  if (powmod_u64(a, (l - 1) / 2, l) != 1) return -1;
  if (l % 4 == 3) return std::int64_t(powmod_u64(a, (l + 1) / 4, l));
  // Tonelli-Shanks
  std::uint64_t q = l - 1, s = 0;
  while (q % 2 == 0) { q /= 2; ++s; }
  std::uint64_t z = 2;
  while (powmod_u64(z, (l - 1) / 2, l) == 1) ++z;
  std::uint64_t m = s;
  std::uint64_t c = powmod_u64(z, q, l);
  std::uint64_t t = powmod_u64(a, q, l);
  std::uint64_t r = powmod_u64(a, (q + 1) / 2, l);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) { tt = mulmod_u64(tt, tt, l); ++i; }
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod_u64(b, b, l);
    m = i;
    c = mulmod_u64(b, b, l);
    t = mulmod_u64(t, c, l);
    r = mulmod_u64(r, b, l);
  }
  return std::int64_t(r);
}

}  // namespace finemu
