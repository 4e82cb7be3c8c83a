#include "finemu/poly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace finemu {

// ---------------------------------------------------------------- PolyZ ----

PolyZ::PolyZ(std::vector<Int> coeffs) : c(std::move(coeffs)) { normalize(); }

PolyZ PolyZ::from_longs(const std::vector<long>& coeffs) {
  std::vector<Int> v;
  v.reserve(coeffs.size());
  for (long x : coeffs) v.emplace_back(x);
  return PolyZ(std::move(v));
}

PolyZ PolyZ::x_power(std::size_t k, const Int& lead) {
  std::vector<Int> v(k + 1, Int(0));
  v[k] = lead;
  return PolyZ(std::move(v));
}

const Int& PolyZ::coeff(std::size_t i) const {
  static const Int zero(0);
  return i < c.size() ? c[i] : zero;
}

void PolyZ::normalize() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

PolyZ PolyZ::operator-() const {
  PolyZ r = *this;
  for (auto& x : r.c) x = -x;
  return r;
}

PolyZ PolyZ::operator+(const PolyZ& o) const {
  std::vector<Int> v(std::max(c.size(), o.c.size()), Int(0));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) + o.coeff(i);
  return PolyZ(std::move(v));
}

PolyZ PolyZ::operator-(const PolyZ& o) const { return *this + (-o); }

PolyZ PolyZ::operator*(const PolyZ& o) const {
  if (is_zero() || o.is_zero()) return PolyZ();
  std::vector<Int> v(c.size() + o.c.size() - 1, Int(0));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < o.c.size(); ++j) v[i + j] += c[i] * o.c[j];
  return PolyZ(std::move(v));
}

PolyZ PolyZ::operator*(const Int& k) const {
  PolyZ r = *this;
  for (auto& x : r.c) x *= k;
  r.normalize();
  return r;
}

PolyZ PolyZ::derivative() const {
  if (c.size() <= 1) return PolyZ();
  std::vector<Int> v(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) v[i - 1] = c[i] * long(i);
  return PolyZ(std::move(v));
}

Int PolyZ::evaluate(const Int& x) const {
  Int r = 0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

Int PolyZ::content() const {
  Int g = 0;
  for (const auto& x : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

PolyZ PolyZ::primitive_part() const {
  if (is_zero()) return PolyZ();
  Int g = content();
  PolyZ r = *this;
  for (auto& x : r.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return r;
}

Int PolyZ::max_abs_coeff() const {
  Int m = 0;
  for (const auto& x : c) {
    Int a = x < 0 ? Int(-x) : x;
    if (a > m) m = a;
  }
  return m;
}

std::string PolyZ::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    Int a = c[i];
    if (first) {
      if (a < 0) { os << "-"; a = -a; }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    if (i == 0 || a != 1) os << a.get_str();
    if (i > 0) {
      if (a != 1) os << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

bool divides(const PolyZ& divisor, const PolyZ& dividend, PolyZ* quotient) {
  if (divisor.is_zero()) return dividend.is_zero();
  if (dividend.is_zero()) {
    if (quotient) *quotient = PolyZ();
    return true;
  }
  if (dividend.degree() < divisor.degree()) return false;
  std::vector<Int> rem = dividend.c;
  std::vector<Int> quo(dividend.degree() - divisor.degree() + 1, Int(0));
  const Int& lead = divisor.c.back();
  for (int i = int(rem.size()) - 1; i >= divisor.degree(); --i) {
    if (rem[i] == 0) continue;
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rem[i].get_mpz_t(), lead.get_mpz_t());
    if (r != 0) return false;
    quo[i - divisor.degree()] = q;
    for (int j = 0; j <= divisor.degree(); ++j) rem[i - divisor.degree() + j] -= q * divisor.c[j];
  }
  for (const auto& x : rem)
    if (x != 0) return false;
  if (quotient) *quotient = PolyZ(std::move(quo));
  return true;
}

// ---------------------------------------------------------------- PolyQ ----

PolyQ::PolyQ(std::vector<Rat> coeffs) : c(std::move(coeffs)) { normalize(); }

PolyQ PolyQ::from_z(const PolyZ& p) {
  std::vector<Rat> v;
  v.reserve(p.c.size());
  for (const auto& x : p.c) v.emplace_back(x);
  return PolyQ(std::move(v));
}

void PolyQ::normalize() {
  for (auto& x : c) x.canonicalize();
  while (!c.empty() && c.back() == 0) c.pop_back();
}

PolyQ PolyQ::operator+(const PolyQ& o) const {
  std::vector<Rat> v(std::max(c.size(), o.c.size()), Rat(0));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i < c.size()) v[i] += c[i];
    if (i < o.c.size()) v[i] += o.c[i];
  }
  return PolyQ(std::move(v));
}

PolyQ PolyQ::operator-(const PolyQ& o) const { return *this + o * Rat(-1); }

PolyQ PolyQ::operator*(const PolyQ& o) const {
  if (is_zero() || o.is_zero()) return PolyQ();
  std::vector<Rat> v(c.size() + o.c.size() - 1, Rat(0));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < o.c.size(); ++j) v[i + j] += c[i] * o.c[j];
  return PolyQ(std::move(v));
}

PolyQ PolyQ::operator*(const Rat& k) const {
  PolyQ r = *this;
  for (auto& x : r.c) x *= k;
  r.normalize();
  return r;
}

PolyQ PolyQ::monic() const {
  if (is_zero()) return *this;
  return *this * Rat(Rat(1) / lc());
}

Rat PolyQ::evaluate(const Rat& x) const {
  Rat r = 0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

PolyZ PolyQ::primitive_z() const {
  if (is_zero()) return PolyZ();
  Int den = 1;
  for (const auto& x : c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Int> v;
  v.reserve(c.size());
  for (const auto& x : c) {
    Rat y = x * Rat(den);
    y.canonicalize();
    v.emplace_back(y.get_num());
  }
  PolyZ p(std::move(v));
  return p.primitive_part();
}

void divmod_q(const PolyQ& dividend, const PolyQ& divisor, PolyQ* q, PolyQ* r) {
  if (divisor.is_zero()) throw invariant_error("divmod_q by zero");
  std::vector<Rat> rem = dividend.c;
  int dq = dividend.degree() - divisor.degree();
  std::vector<Rat> quo(dq >= 0 ? dq + 1 : 0, Rat(0));
  for (int i = int(rem.size()) - 1; i >= divisor.degree(); --i) {
    if (rem[i] == 0) continue;
    Rat f = rem[i] / divisor.c.back();
    quo[i - divisor.degree()] = f;
    for (int j = 0; j <= divisor.degree(); ++j) {
      rem[i - divisor.degree() + j] -= f * divisor.c[j];
      rem[i - divisor.degree() + j].canonicalize();
    }
  }
  if (q) *q = PolyQ(std::move(quo));
  if (r) *r = PolyQ(std::move(rem));
}

PolyQ gcd_q(const PolyQ& a, const PolyQ& b) {
  PolyQ x = a, y = b;
  while (!y.is_zero()) {
    PolyQ r;
    divmod_q(x, y, nullptr, &r);
    x = y;
    y = r;
  }
  return x.monic();
}

PolyQ xgcd_q(const PolyQ& a, const PolyQ& b, PolyQ* s_out, PolyQ* t_out) {
  PolyQ r0 = a, r1 = b;
  PolyQ s0(std::vector<Rat>{Rat(1)}), s1;
  PolyQ t0, t1(std::vector<Rat>{Rat(1)});
  while (!r1.is_zero()) {
    PolyQ q, r;
    divmod_q(r0, r1, &q, &r);
    PolyQ s2 = s0 - q * s1;
    PolyQ t2 = t0 - q * t1;
    r0 = r1; r1 = r;
    s0 = s1; s1 = s2;
    t0 = t1; t1 = t2;
  }
  if (!r0.is_zero()) {
    Rat inv = Rat(1) / r0.lc();
    r0 = r0 * inv;
    s0 = s0 * inv;
    t0 = t0 * inv;
  }
  if (s_out) *s_out = s0;
  if (t_out) *t_out = t0;
  return r0;
}

// --------------------------------------------------------------- PolyFp ----

PolyFp::PolyFp(std::uint64_t mod, std::vector<std::uint64_t> coeffs) : l(mod), c(std::move(coeffs)) {
  for (auto& x : c) x %= l;
  normalize();
}

PolyFp PolyFp::reduce(const PolyZ& p, std::uint64_t mod) {
  std::vector<std::uint64_t> v;
  v.reserve(p.c.size());
  Int m(static_cast<unsigned long>(mod));
  for (const auto& x : p.c) {
    Int r = x % m;
    if (r < 0) r += m;
    v.push_back(r.get_ui());
  }
  return PolyFp(mod, std::move(v));
}

PolyFp PolyFp::x_power(std::uint64_t mod, std::size_t k) {
  std::vector<std::uint64_t> v(k + 1, 0);
  v[k] = 1;
  return PolyFp(mod, std::move(v));
}

void PolyFp::normalize() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

PolyFp PolyFp::operator+(const PolyFp& o) const {
  std::vector<std::uint64_t> v(std::max(c.size(), o.c.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t a = i < c.size() ? c[i] : 0;
    std::uint64_t b = i < o.c.size() ? o.c[i] : 0;
    v[i] = (a + b) % l;
  }
  return PolyFp(l, std::move(v));
}

PolyFp PolyFp::operator-(const PolyFp& o) const {
  std::vector<std::uint64_t> v(std::max(c.size(), o.c.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t a = i < c.size() ? c[i] : 0;
    std::uint64_t b = i < o.c.size() ? o.c[i] : 0;
    v[i] = (a + l - b) % l;
  }
  return PolyFp(l, std::move(v));
}

PolyFp PolyFp::operator*(const PolyFp& o) const {
  if (is_zero() || o.is_zero()) return PolyFp(l, {});
  std::vector<std::uint64_t> v(c.size() + o.c.size() - 1, 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    for (std::size_t j = 0; j < o.c.size(); ++j)
      v[i + j] = (v[i + j] + mulmod_u64(c[i], o.c[j], l)) % l;
  }
  return PolyFp(l, std::move(v));
}

PolyFp PolyFp::monic() const {
  if (is_zero()) return *this;
  std::uint64_t inv = invmod_u64(lc(), l);
  std::vector<std::uint64_t> v = c;
  for (auto& x : v) x = mulmod_u64(x, inv, l);
  return PolyFp(l, std::move(v));
}

std::uint64_t PolyFp::evaluate(std::uint64_t x) const {
  std::uint64_t r = 0;
  for (std::size_t i = c.size(); i-- > 0;) r = (mulmod_u64(r, x, l) + c[i]) % l;
  return r;
}

PolyFp PolyFp::derivative() const {
  if (c.size() <= 1) return PolyFp(l, {});
  std::vector<std::uint64_t> v(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) v[i - 1] = mulmod_u64(c[i], i % l, l);
  return PolyFp(l, std::move(v));
}

std::string PolyFp::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || c[i] != 1) os << c[i];
    if (i > 0) {
      if (c[i] != 1) os << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

void divmod_fp(const PolyFp& dividend, const PolyFp& divisor, PolyFp* q, PolyFp* r) {
  if (divisor.is_zero()) throw invariant_error("divmod_fp by zero");
  std::uint64_t l = divisor.l;
  std::vector<std::uint64_t> rem = dividend.c;
  int dq = dividend.degree() - divisor.degree();
  std::vector<std::uint64_t> quo(dq >= 0 ? dq + 1 : 0, 0);
  std::uint64_t inv = invmod_u64(divisor.lc(), l);
  for (int i = int(rem.size()) - 1; i >= divisor.degree(); --i) {
    if (rem[i] == 0) continue;
    std::uint64_t f = mulmod_u64(rem[i], inv, l);
    quo[i - divisor.degree()] = f;
    for (int j = 0; j <= divisor.degree(); ++j) {
      std::uint64_t sub = mulmod_u64(f, divisor.c[j], l);
      std::uint64_t& slot = rem[i - divisor.degree() + j];
      slot = (slot + l - sub) % l;
    }
  }
  if (q) *q = PolyFp(l, std::move(quo));
  if (r) *r = PolyFp(l, std::move(rem));
}

PolyFp gcd_fp(PolyFp a, PolyFp b) {
  while (!b.is_zero()) {
    PolyFp r;
    divmod_fp(a, b, nullptr, &r);
    a = b;
    b = r;
  }
  return a.monic();
}

PolyFp mulmod_fp(const PolyFp& a, const PolyFp& b, const PolyFp& mod) {
  PolyFp r;
  divmod_fp(a * b, mod, nullptr, &r);
  return r;
}

PolyFp powmod_fp(const PolyFp& base, const Int& e, const PolyFp& mod) {
  PolyFp result(mod.l, {1});
  PolyFp b;
  divmod_fp(base, mod, nullptr, &b);
  Int k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) result = mulmod_fp(result, b, mod);
    b = mulmod_fp(b, b, mod);
    k >>= 1;
  }
  return result;
}

bool is_squarefree_fp(const PolyFp& f) {
  if (f.degree() <= 0) return true;
  return gcd_fp(f, f.derivative()).degree() == 0;
}

namespace {

// Equal-degree splitting of a monic squarefree product of degree-d irreducibles.
void equal_degree_split(const PolyFp& f, int d, std::vector<PolyFp>& out, SplitMix64& rng) {
  if (f.degree() == d) {
    out.push_back(f);
    return;
  }
  std::uint64_t l = f.l;
  while (true) {
    std::vector<std::uint64_t> rc(std::size_t(f.degree()), 0);
    for (auto& x : rc) x = rng.below(l);
    PolyFp r(l, std::move(rc));
    if (r.degree() < 1) continue;
    PolyFp g = gcd_fp(f, r);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree_split(g, d, out, rng);
      PolyFp q;
      divmod_fp(f, g, &q, nullptr);
      equal_degree_split(q.monic(), d, out, rng);
      return;
    }
    if (l == 2) {
      // trace map: r + r^2 + r^4 + ... (d terms)
      PolyFp t = r, acc(l, {});
      for (int i = 0; i < d; ++i) {
        acc = acc + t;
        t = mulmod_fp(t, t, f);
      }
      g = gcd_fp(f, acc);
    } else {
      Int e = (pow_int(Int((unsigned long)l), (unsigned long)d) - 1) / 2;
      PolyFp t = powmod_fp(r, e, f);
      g = gcd_fp(f, t - PolyFp(l, {1}));
    }
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree_split(g, d, out, rng);
      PolyFp q;
      divmod_fp(f, g, &q, nullptr);
      equal_degree_split(q.monic(), d, out, rng);
      return;
    }
  }
}

bool poly_fp_less(const PolyFp& a, const PolyFp& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.c.size(); i-- > 0;) {
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  }
  return false;
}

}  // namespace

std::vector<FpFactor> factor_poly_fp(const PolyFp& f_in) {
  if (f_in.l < 2) throw capability_error("factor_poly_fp: modulus must be prime");
  if (f_in.is_zero()) throw capability_error("factor_poly_fp: zero polynomial");
  std::uint64_t l = f_in.l;
  std::vector<FpFactor> out;
  PolyFp f = f_in.monic();
  if (f.degree() == 0) return out;
  SplitMix64 rng(0xC0FFEE ^ (l * 2654435761ull) ^ (std::uint64_t(f.degree()) << 32));

  // Squarefree decomposition over F_l, handling p-th power parts.
  std::vector<std::pair<PolyFp, unsigned>> squarefree_parts;  // (part, multiplicity)
  std::vector<std::pair<PolyFp, unsigned>> work{{f, 1}};
  while (!work.empty()) {
    auto [g, mult] = work.back();
    work.pop_back();
    if (g.degree() == 0) continue;
    PolyFp d = g.derivative();
    if (d.is_zero()) {
      // g is an l-th power: g(x) = h(x^l) -> h(x)^l via coefficient Frobenius
      std::vector<std::uint64_t> hc;
      for (std::size_t i = 0; i < g.c.size(); i += std::size_t(l)) hc.push_back(g.c[i]);
      work.push_back({PolyFp(l, std::move(hc)), unsigned(mult * l)});
      continue;
    }
    PolyFp a = gcd_fp(g, d);
    PolyFp b;
    divmod_fp(g, a, &b, nullptr);  // b = squarefree-ish part
    unsigned i = 1;
    while (b.degree() > 0) {
      PolyFp c = gcd_fp(a, b);
      PolyFp piece;
      divmod_fp(b, c, &piece, nullptr);
      if (piece.degree() > 0) squarefree_parts.push_back({piece.monic(), mult * i});
      PolyFp an;
      divmod_fp(a, c, &an, nullptr);
      a = an;
      b = c;
      ++i;
    }
    if (a.degree() > 0) work.push_back({a, mult});
  }

  for (auto& [part, mult] : squarefree_parts) {
    // Distinct-degree on each squarefree part.
    PolyFp rest = part;
    PolyFp xq = PolyFp::x_power(l, 1);
    Int lz((unsigned long)l);
    int d = 0;
    while (rest.degree() > 0) {
      ++d;
      if (2 * d > rest.degree()) {
        out.push_back({rest, mult});
        break;
      }
      xq = powmod_fp(xq, lz, rest);
      PolyFp g = gcd_fp(rest, xq - PolyFp::x_power(l, 1));
      if (g.degree() > 0) {
        std::vector<PolyFp> irr;
        equal_degree_split(g, d, irr, rng);
        for (auto& h : irr) out.push_back({h, mult});
        PolyFp q;
        divmod_fp(rest, g, &q, nullptr);
        rest = q.monic();
        PolyFp r2;
        divmod_fp(xq, rest, nullptr, &r2);
        xq = r2;
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const FpFactor& a, const FpFactor& b) { return poly_fp_less(a.factor, b.factor); });
  return out;
}

std::vector<std::uint64_t> roots_fp(const PolyFp& f) {
  std::vector<std::uint64_t> roots;
  if (f.is_zero()) throw capability_error("roots_fp: zero polynomial");
  if (f.l <= 257) {
    for (std::uint64_t x = 0; x < f.l; ++x)
      if (f.evaluate(x) == 0) roots.push_back(x);
    return roots;
  }
  for (const auto& fac : factor_poly_fp(f))
    if (fac.factor.degree() == 1) {
      // x + a = 0 -> root -a
      std::uint64_t a = fac.factor.c[0];
      roots.push_back((f.l - a) % f.l);
    }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ---------------------------------------------------- factorization over Q ----

namespace {

// Hensel lift: F monic mod l^k = G*H (monic), s*G + t*H = 1 mod l^k.
// Lift everything to mod l^{2k}.  All polys integer-coefficient, reduced.
struct HenselPair {
  PolyZ g, h, s, t;
};

PolyZ reduce_mod(const PolyZ& p, const Int& m) {
  std::vector<Int> v = p.c;
  for (auto& x : v) {
    x %= m;
    if (x < 0) x += m;
  }
  return PolyZ(std::move(v));
}

PolyZ sym_reduce(const PolyZ& p, const Int& m) {
  std::vector<Int> v = p.c;
  Int half = m / 2;
  for (auto& x : v) {
    x %= m;
    if (x < 0) x += m;
    if (x > half) x -= m;
  }
  return PolyZ(std::move(v));
}

// Division with invertible-lc divisor in (Z/m)[x]: dividend = q*divisor + r.
void divmod_mod(const PolyZ& dividend, const PolyZ& divisor, const Int& m, PolyZ* q, PolyZ* r) {
  Int lead = divisor.lc() % m;
  if (lead < 0) lead += m;
  Int inv;
  if (mpz_invert(inv.get_mpz_t(), lead.get_mpz_t(), m.get_mpz_t()) == 0)
    throw invariant_error("divmod_mod: leading coefficient not invertible");
  std::vector<Int> rem = reduce_mod(dividend, m).c;
  int dq = int(rem.size()) - 1 - divisor.degree();
  std::vector<Int> quo(dq >= 0 ? dq + 1 : 0, Int(0));
  for (int i = int(rem.size()) - 1; i >= divisor.degree(); --i) {
    if (rem[i] == 0) continue;
    Int f = (rem[i] * inv) % m;
    quo[i - divisor.degree()] = f;
    for (int j = 0; j <= divisor.degree(); ++j) {
      Int& slot = rem[i - divisor.degree() + j];
      slot = (slot - f * divisor.c[j]) % m;
      if (slot < 0) slot += m;
    }
  }
  if (q) *q = PolyZ(std::move(quo));
  if (r) *r = PolyZ(std::move(rem));
}

// One quadratic Hensel step: from mod m to mod m^2 (F monic).
HenselPair hensel_step(const PolyZ& F, const HenselPair& in, const Int& m) {
  Int m2 = m * m;
  // e = F - g*h
  PolyZ e = reduce_mod(F - in.g * in.h, m2);
  PolyZ q, r;
  divmod_mod(reduce_mod(in.s * e, m2), in.h, m2, &q, &r);
  PolyZ g1 = reduce_mod(in.g + in.t * e + q * in.g, m2);
  PolyZ h1 = reduce_mod(in.h + r, m2);
  // Lift Bezout: b = s*g1 + t*h1 - 1
  PolyZ b = reduce_mod(in.s * g1 + in.t * h1 - PolyZ(std::vector<Int>{Int(1)}), m2);
  PolyZ c, d;
  divmod_mod(reduce_mod(in.s * b, m2), h1, m2, &c, &d);
  PolyZ s1 = reduce_mod(in.s - d, m2);
  PolyZ t1 = reduce_mod(in.t - in.t * b - c * g1, m2);
  return {g1, h1, s1, t1};
}

// Lift factorization of monic F == prod(factors) mod l to mod l^e >= target.
// factors: monic mod l, pairwise coprime.  Returns factors mod l^E (E power of 2
// exponent chain), along with the final modulus.
void hensel_lift_tree(const PolyZ& F, std::vector<PolyZ>& factors, const Int& l, const Int& target,
                      Int* modulus_out) {
  if (factors.size() == 1) {
    Int m = l;
    while (m < target) m = m * m;
    factors[0] = reduce_mod(F, m);
    *modulus_out = m;
    return;
  }
  // Split into two halves G = prod(first), H = prod(rest) mod l.
  std::size_t half = factors.size() / 2;
  std::vector<PolyZ> left(factors.begin(), factors.begin() + half);
  std::vector<PolyZ> right(factors.begin() + half, factors.end());
  PolyZ G(std::vector<Int>{Int(1)}), H(std::vector<Int>{Int(1)});
  for (const auto& f : left) G = reduce_mod(G * f, l);
  for (const auto& f : right) H = reduce_mod(H * f, l);
  // Bezout over F_l via PolyFp xgcd (l fits small word) -- use PolyQ-free route:
  std::uint64_t lu = l.get_ui();
  PolyFp Gp = PolyFp::reduce(G, lu), Hp = PolyFp::reduce(H, lu);
  // extended gcd over F_l
  PolyFp r0 = Gp, r1 = Hp;
  PolyFp s0(lu, {1}), s1(lu, {});
  PolyFp t0(lu, {}), t1(lu, {1});
  while (!r1.is_zero()) {
    PolyFp q, r;
    divmod_fp(r0, r1, &q, &r);
    PolyFp s2 = s0 - q * s1;
    PolyFp t2 = t0 - q * t1;
    r0 = r1; r1 = r;
    s0 = s1; s1 = s2;
    t0 = t1; t1 = t2;
  }
  if (r0.degree() != 0) throw invariant_error("hensel: factors not coprime");
  std::uint64_t inv = invmod_u64(r0.lc(), lu);
  auto scale_to_z = [&](const PolyFp& p) {
    std::vector<Int> v;
    v.reserve(p.c.size());
    for (auto x : p.c) v.emplace_back((unsigned long)mulmod_u64(x, inv, lu));
    return PolyZ(std::move(v));
  };
  HenselPair pair{reduce_mod(G, l), reduce_mod(H, l), scale_to_z(s0), scale_to_z(t0)};
  Int m = l;
  while (m < target) {
    pair = hensel_step(F, pair, m);
    m = m * m;
  }
  hensel_lift_tree(pair.g, left, l, target, modulus_out);
  hensel_lift_tree(pair.h, right, l, target, modulus_out);
  // Left/right recursion each re-derive the modulus chain from l; the final
  // modulus is identical because it only depends on l and target.
  std::copy(left.begin(), left.end(), factors.begin());
  std::copy(right.begin(), right.end(), factors.begin() + half);
  *modulus_out = m;
}

// The monic transform F(x) = lc^(n-1) f(x/lc) sends a monic factor g of
// f mod l (degree d) to the monic factor lc^d g(x/lc) of F mod l: coefficient
// j picks up a factor lc^(d-j).  Without this frame change the modular factors
// do not multiply to F and Hensel lifting diverges.
std::vector<PolyZ> modular_factors_in_monic_frame(const std::vector<FpFactor>& facs,
                                                  const Int& lead, std::uint64_t l) {
  Int r = lead % Int((unsigned long)l);
  if (r < 0) r += Int((unsigned long)l);
  std::uint64_t lr = r.get_ui();
  std::vector<PolyZ> out;
  out.reserve(facs.size());
  for (const auto& fac : facs) {
    const auto& c = fac.factor.c;
    std::vector<Int> v(c.size());
    std::uint64_t pw = 1;  // lr^(d-j) while j descends from d
    for (std::size_t j = c.size(); j-- > 0;) {
      v[j] = Int((unsigned long)mulmod_u64(c[j], pw, l));
      pw = mulmod_u64(pw, lr, l);
    }
    out.push_back(PolyZ(std::move(v)));
  }
  return out;
}

// Factor a primitive squarefree polynomial with positive leading coefficient
// and nonzero constant term.
std::vector<PolyZ> factor_squarefree_primitive(const PolyZ& f) {
  if (f.degree() > 100) throw capability_error("factor_poly_q: degree above supported bound 100");
  if (f.degree() == 0) return {};
  if (f.degree() == 1) return {f};

  // Choose a good prime: f squarefree mod l, lc not divisible; pick the one
  // with the fewest modular factors among the first few candidates.
  const Int& lead = f.lc();
  std::uint64_t best_l = 0;
  std::vector<FpFactor> best_facs;
  int tried = 0;
  for (std::uint32_t lp : small_primes()) {
    if (lp == 2) continue;  // odd primes make Hensel bookkeeping simpler
    if (mpz_divisible_ui_p(lead.get_mpz_t(), lp)) continue;
    PolyFp fp = PolyFp::reduce(f, lp);
    if (fp.degree() != f.degree() || !is_squarefree_fp(fp)) continue;
    auto facs = factor_poly_fp(fp);
    if (best_l == 0 || facs.size() < best_facs.size()) {
      best_l = lp;
      best_facs = std::move(facs);
    }
    if (++tried >= 5 || best_facs.size() == 1) break;
  }
  if (best_l == 0) throw capability_error("factor_poly_q: no usable prime found");
  if (best_facs.size() == 1) return {f};

  // Work with the monic transform F(x) = lc^(n-1) f(x/lc): coefficient i of F
  // is f_i * lc^(n-1-i), and the leading coefficient becomes exactly 1.
  int n = f.degree();
  std::vector<Int> Fc(std::size_t(n + 1));
  Fc[std::size_t(n)] = 1;
  Int pw = 1;
  for (int i = n - 1; i >= 0; --i) {
    Fc[std::size_t(i)] = f.coeff(std::size_t(i)) * pw;
    pw *= lead;
  }
  PolyZ F(std::move(Fc));

  // Mignotte-style bound on coefficients of monic factors of F, times 2.
  Int norm = F.max_abs_coeff();
  Int bound = (Int(n) + 1) * pow_int(Int(2), (unsigned long)n + 1) * norm;
  Int target = 2 * bound + 1;

  Int l((unsigned long)best_l);
  std::vector<PolyZ> modular = modular_factors_in_monic_frame(best_facs, lead, best_l);
  Int modulus;
  hensel_lift_tree(reduce_mod(F, [&] {
                     Int m = l;
                     while (m < target) m = m * m;
                     return m;
                   }()),
                   modular, l, target, &modulus);

  // Zassenhaus recombination on the monic lift, mapped back through x -> lc*x.
  // Cheap filter first: a true monic factor's constant term (symmetrized)
  // divides F(0), so most false subsets die on a scalar test.
  const Int F0 = F.coeff(0);
  std::vector<PolyZ> result;
  std::vector<int> alive(modular.size(), 1);
  PolyZ remaining = f;
  long attempts = 0;
  const long attempt_cap = 1L << 24;
  auto try_subset = [&](const std::vector<std::size_t>& subset) -> bool {
    if (++attempts > attempt_cap)
      throw capability_error("factor_poly_q: recombination budget exceeded");
    Int c0 = 1;
    for (auto i : subset) c0 = (c0 * modular[i].coeff(0)) % modulus;
    if (c0 > modulus / 2) c0 -= modulus;
    if (c0 == 0 || !mpz_divisible_p(F0.get_mpz_t(), c0.get_mpz_t())) return false;
    PolyZ cand(std::vector<Int>{Int(1)});
    for (auto i : subset) cand = reduce_mod(cand * modular[i], modulus);
    // candidate monic factor of F mod modulus; undo the lc substitution:
    // g(x) = cand(lc * x) made primitive.
    PolyZ scaled = sym_reduce(cand, modulus);
    std::vector<Int> gc(scaled.c.size());
    Int p2 = 1;
    for (std::size_t i = 0; i < scaled.c.size(); ++i) {
      gc[i] = scaled.c[i] * p2;
      p2 *= lead;
    }
    PolyZ g = PolyZ(std::move(gc)).primitive_part();
    if (g.lc() < 0) g = -g;
    if (g.degree() < 1) return false;
    PolyZ q;
    if (!divides(g, remaining, &q)) return false;
    result.push_back(g);
    remaining = q;
    for (auto i : subset) alive[i] = 0;
    return true;
  };

  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < modular.size(); ++i) live.push_back(i);
  std::size_t take = 1;
  while (2 * take <= live.size()) {
    bool found = false;
    std::vector<std::size_t> idx(take);
    for (std::size_t i = 0; i < take; ++i) idx[i] = i;
    while (true) {
      std::vector<std::size_t> subset;
      for (auto i : idx) subset.push_back(live[i]);
      if (try_subset(subset)) {
        found = true;
        break;
      }
      // next combination of size `take`
      std::size_t k = take;
      while (k > 0 && idx[k - 1] == live.size() - take + (k - 1)) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < take; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (found) {
      live.clear();
      for (std::size_t i = 0; i < modular.size(); ++i)
        if (alive[i]) live.push_back(i);
    } else {
      ++take;
    }
  }
  if (remaining.degree() > 0) {
    PolyZ g = remaining.primitive_part();
    if (g.lc() < 0) g = -g;
    result.push_back(g);
  }
  return result;
}

bool poly_z_less(const PolyZ& a, const PolyZ& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.c.size(); i-- > 0;) {
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  }
  return false;
}

}  // namespace

ZFactorization factor_poly_q(const PolyZ& f) {
  if (f.is_zero()) throw capability_error("factor_poly_q: zero polynomial");
  ZFactorization out;
  Int cont = f.content();
  PolyZ g = f.primitive_part();
  if (g.lc() < 0) {
    g = -g;
    cont = -cont;
  }
  out.content = Rat(cont);
  if (g.degree() == 0) return out;

  // Strip powers of x so every squarefree part has nonzero constant term.
  std::size_t xval = 0;
  while (xval < g.c.size() && g.c[xval] == 0) ++xval;
  if (xval > 0) {
    out.factors.push_back({PolyZ::x_power(1), unsigned(xval)});
    g = PolyZ(std::vector<Int>(g.c.begin() + long(xval), g.c.end()));
    if (g.degree() == 0) return out;
  }

  // Squarefree decomposition (Yun) over Q.
  auto deriv_q = [](const PolyQ& p) {
    std::vector<Rat> v;
    if (p.c.size() > 1) {
      v.resize(p.c.size() - 1);
      for (std::size_t k = 1; k < p.c.size(); ++k) v[k - 1] = p.c[k] * Rat(long(k));
    }
    return PolyQ(std::move(v));
  };
  PolyQ gq = PolyQ::from_z(g);
  PolyQ d = PolyQ::from_z(g.derivative());
  PolyQ a = gcd_q(gq, d);
  std::vector<std::pair<PolyZ, unsigned>> squarefree;
  if (a.degree() == 0) {
    squarefree.push_back({g, 1});
  } else {
    PolyQ b, c;
    divmod_q(gq, a, &b, nullptr);
    divmod_q(d, a, &c, nullptr);
    unsigned i = 1;
    while (b.degree() > 0) {
      PolyQ y = c - deriv_q(b);
      PolyQ gi = gcd_q(b, y);
      if (gi.degree() > 0) squarefree.push_back({gi.primitive_z(), i});
      PolyQ bn, cn;
      divmod_q(b, gi, &bn, nullptr);
      divmod_q(y, gi, &cn, nullptr);
      b = bn;
      c = cn;
      ++i;
    }
  }

  for (auto& [part, mult] : squarefree) {
    PolyZ p = part;
    if (p.lc() < 0) p = -p;
    for (auto& irr : factor_squarefree_primitive(p)) out.factors.push_back({irr, mult});
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const ZFactor& x, const ZFactor& y) { return poly_z_less(x.factor, y.factor); });
  return out;
}

ZFactorization factor_poly_q(const PolyQ& f) {
  if (f.is_zero()) throw capability_error("factor_poly_q: zero polynomial");
  PolyZ z = f.primitive_z();
  ZFactorization out = factor_poly_q(z);
  // Adjust content so that content * prod(factors^mult) == f.
  PolyQ prod(std::vector<Rat>{Rat(1)});
  for (const auto& fac : out.factors)
    for (unsigned i = 0; i < fac.multiplicity; ++i) prod = prod * PolyQ::from_z(fac.factor);
  // f = content * prod  =>  content = lc(f)/lc(prod)
  out.content = f.lc() / prod.lc();
  return out;
}

BoundedFactorization factor_upto_degree(const PolyZ& f, int maxdeg) {
  if (f.is_zero()) throw capability_error("factor_upto_degree: zero polynomial");
  BoundedFactorization out;
  Int cont = f.content();
  PolyZ g = f.primitive_part();
  if (g.lc() < 0) {
    g = -g;
    cont = -cont;
  }
  out.content = Rat(cont);
  out.cofactor = PolyZ(std::vector<Int>{Int(1)});
  if (g.degree() == 0) return out;

  // Strip a factor of x (a squarefree polynomial has at most one).
  std::size_t xval = 0;
  while (xval < g.c.size() && g.c[xval] == 0) ++xval;
  if (xval > 1) throw invariant_error("factor_upto_degree: input not squarefree");
  if (xval == 1) {
    if (maxdeg >= 1) {
      out.factors.push_back(PolyZ::x_power(1));
      g = PolyZ(std::vector<Int>(g.c.begin() + 1, g.c.end()));
    }
    // else the x factor stays in the cofactor below, but maxdeg >= 1 always
    // holds for the callers; handle uniformly anyway.
    if (maxdeg < 1) {
      out.cofactor = g;
      return out;
    }
    if (g.degree() == 0) return out;
  }
  {
    PolyQ gq = PolyQ::from_z(g);
    PolyQ dq = PolyQ::from_z(g.derivative());
    if (gcd_q(gq, dq).degree() != 0)
      throw invariant_error("factor_upto_degree: input not squarefree");
  }
  if (maxdeg < 1) {
    out.cofactor = g;
    return out;
  }

  // Small enough: fall back on complete factorization.
  if (g.degree() <= std::max(maxdeg, 8)) {
    for (auto& irr : factor_squarefree_primitive(g)) {
      if (irr.degree() <= maxdeg)
        out.factors.push_back(irr);
      else
        out.cofactor = out.cofactor * irr;
    }
    if (out.cofactor.lc() < 0) out.cofactor = -out.cofactor;
    std::sort(out.factors.begin(), out.factors.end(), poly_z_less);
    return out;
  }

  // Choose a prime with few modular factors; the factor degrees mod l refine
  // the search space for low-degree rational factors.
  const Int& lead = g.lc();
  std::uint64_t best_l = 0;
  std::vector<FpFactor> best_facs;
  int tried = 0;
  for (std::uint32_t lp : small_primes()) {
    if (lp == 2) continue;
    if (mpz_divisible_ui_p(lead.get_mpz_t(), lp)) continue;
    PolyFp fp = PolyFp::reduce(g, lp);
    if (fp.degree() != g.degree() || !is_squarefree_fp(fp)) continue;
    auto facs = factor_poly_fp(fp);
    if (best_l == 0 || facs.size() < best_facs.size()) {
      best_l = lp;
      best_facs = std::move(facs);
    }
    if (++tried >= 8 || best_facs.size() == 1) break;
  }
  if (best_l == 0) throw capability_error("factor_upto_degree: no usable prime found");
  if (best_facs.size() == 1) {
    out.cofactor = g;  // irreducible, and its degree exceeds maxdeg here
    return out;
  }

  // Monic transform F(x) = lc^(n-1) g(x/lc), Hensel lift, bounded search.
  // Coefficient i of F is g_i * lc^(n-1-i); the leading coefficient is 1.
  int n = g.degree();
  std::vector<Int> Fc(std::size_t(n + 1));
  Fc[std::size_t(n)] = 1;
  Int pw = 1;
  for (int i = n - 1; i >= 0; --i) {
    Fc[std::size_t(i)] = g.coeff(std::size_t(i)) * pw;
    pw *= lead;
  }
  PolyZ F(std::move(Fc));
  Int norm = F.max_abs_coeff();
  Int bound = (Int(n) + 1) * pow_int(Int(2), (unsigned long)n + 1) * norm;
  Int target = 2 * bound + 1;
  Int l((unsigned long)best_l);
  std::vector<PolyZ> modular = modular_factors_in_monic_frame(best_facs, lead, best_l);
  Int modulus;
  hensel_lift_tree(reduce_mod(F, [&] {
                     Int m = l;
                     while (m < target) m = m * m;
                     return m;
                   }()),
                   modular, l, target, &modulus);

  const Int F0 = F.coeff(0);
  std::vector<int> alive(modular.size(), 1);
  PolyZ remaining = g;
  long attempts = 0;
  const long attempt_cap = 1L << 24;
  auto try_subset = [&](const std::vector<std::size_t>& subset) -> bool {
    if (++attempts > attempt_cap)
      throw capability_error("factor_upto_degree: recombination budget exceeded");
    Int c0 = 1;
    for (auto i : subset) c0 = (c0 * modular[i].coeff(0)) % modulus;
    if (c0 > modulus / 2) c0 -= modulus;
    if (c0 == 0 || !mpz_divisible_p(F0.get_mpz_t(), c0.get_mpz_t())) return false;
    PolyZ cand(std::vector<Int>{Int(1)});
    for (auto i : subset) cand = reduce_mod(cand * modular[i], modulus);
    PolyZ scaled = sym_reduce(cand, modulus);
    std::vector<Int> gc(scaled.c.size());
    Int p2 = 1;
    for (std::size_t i = 0; i < scaled.c.size(); ++i) {
      gc[i] = scaled.c[i] * p2;
      p2 *= lead;
    }
    PolyZ cnd = PolyZ(std::move(gc)).primitive_part();
    if (cnd.lc() < 0) cnd = -cnd;
    if (cnd.degree() < 1) return false;
    PolyZ q;
    if (!divides(cnd, remaining, &q)) return false;
    out.factors.push_back(cnd);
    remaining = q;
    for (auto i : subset) alive[i] = 0;
    return true;
  };

  // Increasing-cardinality search over subsets whose modular degree sum stays
  // within maxdeg; minimal subsets come first, so accepted candidates are
  // irreducible.
  for (std::size_t take = 1; take <= std::size_t(maxdeg); ++take) {
    bool restart = true;
    while (restart) {
      restart = false;
      std::vector<std::size_t> live;
      for (std::size_t i = 0; i < modular.size(); ++i)
        if (alive[i]) live.push_back(i);
      if (live.size() < take) break;
      std::vector<std::size_t> chosen;
      std::function<bool(std::size_t, int)> dfs = [&](std::size_t start, int degsum) -> bool {
        if (chosen.size() == take) return try_subset(chosen);
        for (std::size_t i = start; i < live.size(); ++i) {
          if (live.size() - i < take - chosen.size()) break;
          int d = modular[live[i]].degree();
          if (degsum + d > maxdeg) continue;
          chosen.push_back(live[i]);
          if (dfs(i + 1, degsum + d)) return true;
          chosen.pop_back();
        }
        return false;
      };
      if (dfs(0, 0)) restart = true;  // factor removed; rescan this cardinality
    }
  }

  if (remaining.degree() > 0) {
    PolyZ cf = remaining.primitive_part();
    if (cf.lc() < 0) cf = -cf;
    out.cofactor = cf;
  }
  std::sort(out.factors.begin(), out.factors.end(), poly_z_less);
  return out;
}

}  // namespace finemu
