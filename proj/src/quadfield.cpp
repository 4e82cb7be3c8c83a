#include "finemu/quadfield.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace finemu {

QuadField::QuadField(const Int& d_in) {
  if (d_in <= 0) throw std::domain_error("QuadField: d must be positive (field is Q(sqrt(-d)))");
  d = squarefree_kernel(d_in);
  disc = (d % 4 == 3) ? Int(-d) : Int(-4 * d);
}

const char* to_string(SplitType t) {
  switch (t) {
    case SplitType::Split: return "Split";
    case SplitType::Inert: return "Inert";
    case SplitType::Ramified: return "Ramified";
  }
  return "?";
}

SplitType splitting_type(const QuadField& K, const Int& ell) {
  int k = kronecker(K.disc, ell);
  if (k == 1) return SplitType::Split;
  if (k == -1) return SplitType::Inert;
  return SplitType::Ramified;
}

PrimeOfK prime_above(const QuadField& K, const Int& ell) {
  SplitType t = splitting_type(K, ell);
  switch (t) {
    case SplitType::Split: return {ell, t, 1, 1, 2};
    case SplitType::Inert: return {ell, t, 1, 2, 1};
    case SplitType::Ramified: return {ell, t, 2, 1, 1};
  }
  throw invariant_error("prime_above: unreachable");
}

unsigned long class_number(const QuadField& K) {
  static std::map<Int, unsigned long> cache;
  static std::mutex cache_mutex;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(K.disc);
    if (it != cache.end()) return it->second;
  }
  // Count reduced forms (a,b,c): b^2 - 4ac = disc, |b| <= a <= c,
  // b >= 0 if |b| = a or a = c.  disc fundamental => all forms primitive.
  const Int D = K.disc;
  unsigned long h = 0;
  Int absD = -D;
  Int amax;
  mpz_sqrt(amax.get_mpz_t(), Int(absD / 3).get_mpz_t());
  for (Int a = 1; a <= amax; ++a) {
    for (Int b = -a; b <= a; ++b) {
      Int num = b * b - D;
      Int denom = 4 * a;
      if (num % denom != 0) continue;
      Int c = num / denom;
      if (c < a) continue;
      if ((b < 0) && (b == -a || a == c)) continue;
      ++h;
    }
  }
  std::lock_guard<std::mutex> lock(cache_mutex);
  cache[K.disc] = h;
  return h;
}

bool mu_p_in_completion(const PrimeOfK& v, const Int& p) {
  if (v.ell == p) throw std::domain_error("mu_p_in_completion: v must not lie above p");
  Int pw;
  Int e(v.f);
  mpz_powm(pw.get_mpz_t(), v.ell.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  return pw == 1;
}

DecompType anticyclotomic_decomposition(const PrimeOfK& v, const Int& p) {
  if (v.ell == p || v.type == SplitType::Split) return DecompType::Finite;
  return DecompType::Infinite;
}

// ----------------------------------------------------------------- K itself

QuadElem q_add(const QuadElem& x, const QuadElem& y) { return {x.a + y.a, x.b + y.b}; }
QuadElem q_sub(const QuadElem& x, const QuadElem& y) { return {x.a - y.a, x.b - y.b}; }

QuadElem q_mul(const QuadElem& x, const QuadElem& y, const Int& m) {
  return {x.a * y.a + Rat(m) * x.b * y.b, x.a * y.b + x.b * y.a};
}

QuadElem q_inv(const QuadElem& x, const Int& m) {
  Rat n = x.a * x.a - Rat(m) * x.b * x.b;
  if (n == 0) throw invariant_error("q_inv: zero element");
  return {x.a / n, -x.b / n};
}

QuadElem q_conj(const QuadElem& x) { return {x.a, -x.b}; }
QuadElem q_from_rat(const Rat& r) { return {r, Rat(0)}; }

bool is_square_rat(const Rat& r) {
  if (r < 0) return false;
  return mpz_perfect_square_p(r.get_num_mpz_t()) && mpz_perfect_square_p(r.get_den_mpz_t());
}

std::optional<Rat> sqrt_rat(const Rat& r) {
  if (!is_square_rat(r)) return std::nullopt;
  Int num, den;
  mpz_sqrt(num.get_mpz_t(), r.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), r.get_den_mpz_t());
  Rat out(num, den);
  out.canonicalize();
  return out;
}

bool is_square_in_K(const QuadField& K, const Rat& q) {
  if (q == 0) return true;
  if (is_square_rat(q)) return true;
  return is_square_rat(q / Rat(K.m()));
}

std::optional<QuadElem> sqrt_in_K(const QuadField& K, const QuadElem& z) {
  const Rat& alpha = z.a;
  const Rat& beta = z.b;
  const Int m = K.m();
  if (beta == 0) {
    if (alpha == 0) return QuadElem{Rat(0), Rat(0)};
    if (auto u = sqrt_rat(alpha)) return QuadElem{*u, Rat(0)};
    if (auto v = sqrt_rat(alpha / Rat(m))) return QuadElem{Rat(0), *v};
    return std::nullopt;
  }
  // (u + v sqrt(m))^2 = u^2 + m v^2 + 2uv sqrt(m); the norm of z must be a
  // rational square, and then u^2, v^2 are determined up to the sign of n.
  Rat N = alpha * alpha - Rat(m) * beta * beta;
  auto n_opt = sqrt_rat(N);
  if (!n_opt) return std::nullopt;
  for (int sgn : {+1, -1}) {
    Rat n = sgn > 0 ? *n_opt : Rat(-*n_opt);
    Rat u2 = (alpha + n) / 2;
    Rat v2 = (alpha - n) / (2 * Rat(m));
    auto u = sqrt_rat(u2);
    if (!u) continue;
    auto v = sqrt_rat(v2);
    if (!v) continue;
    // fix relative sign so that 2uv = beta
    if (*u != 0) {
      Rat vv = beta / (2 * *u);
      if (vv * vv == v2) return QuadElem{*u, vv};
    }
  }
  return std::nullopt;
}

bool is_square_elem_K(const QuadField& K, const QuadElem& z) {
  return sqrt_in_K(K, z).has_value();
}

// ------------------------------------------------------------------- K[x]

PolyK::PolyK(const Int& m_in, std::vector<QuadElem> coeffs) : m(m_in), c(std::move(coeffs)) {
  normalize();
}

PolyK PolyK::from_q(const Int& m, const PolyQ& p) {
  std::vector<QuadElem> v;
  v.reserve(p.c.size());
  for (const auto& x : p.c) v.push_back(q_from_rat(x));
  return PolyK(m, std::move(v));
}

PolyK PolyK::from_z(const Int& m, const PolyZ& p) { return from_q(m, PolyQ::from_z(p)); }

void PolyK::normalize() {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

bool PolyK::is_rational() const {
  for (const auto& x : c)
    if (x.b != 0) return false;
  return true;
}

PolyQ PolyK::rational_part() const {
  if (!is_rational()) throw invariant_error("rational_part: polynomial not rational");
  std::vector<Rat> v;
  v.reserve(c.size());
  for (const auto& x : c) v.push_back(x.a);
  return PolyQ(std::move(v));
}

PolyK PolyK::operator+(const PolyK& o) const {
  std::vector<QuadElem> v(std::max(c.size(), o.c.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    QuadElem x = i < c.size() ? c[i] : QuadElem{};
    QuadElem y = i < o.c.size() ? o.c[i] : QuadElem{};
    v[i] = q_add(x, y);
  }
  return PolyK(m, std::move(v));
}

PolyK PolyK::operator-(const PolyK& o) const {
  std::vector<QuadElem> v(std::max(c.size(), o.c.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    QuadElem x = i < c.size() ? c[i] : QuadElem{};
    QuadElem y = i < o.c.size() ? o.c[i] : QuadElem{};
    v[i] = q_sub(x, y);
  }
  return PolyK(m, std::move(v));
}

PolyK PolyK::operator*(const PolyK& o) const {
  if (is_zero() || o.is_zero()) return PolyK(m, {});
  std::vector<QuadElem> v(c.size() + o.c.size() - 1);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < o.c.size(); ++j)
      v[i + j] = q_add(v[i + j], q_mul(c[i], o.c[j], m));
  return PolyK(m, std::move(v));
}

bool PolyK::operator==(const PolyK& o) const {
  if (c.size() != o.c.size()) return false;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!(c[i] == o.c[i])) return false;
  return true;
}

PolyK PolyK::conj() const {
  std::vector<QuadElem> v;
  v.reserve(c.size());
  for (const auto& x : c) v.push_back(q_conj(x));
  return PolyK(m, std::move(v));
}

PolyK PolyK::monic() const {
  if (is_zero()) return *this;
  QuadElem inv = q_inv(lc(), m);
  std::vector<QuadElem> v;
  v.reserve(c.size());
  for (const auto& x : c) v.push_back(q_mul(x, inv, m));
  return PolyK(m, std::move(v));
}

QuadElem PolyK::evaluate(const QuadElem& x) const {
  QuadElem r{};
  for (std::size_t i = c.size(); i-- > 0;) r = q_add(q_mul(r, x, m), c[i]);
  return r;
}

std::string PolyK::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c[i].a.get_str();
    if (c[i].b != 0) os << (c[i].b > 0 ? "+" : "") << c[i].b.get_str() << "*w";
    os << ")";
    if (i > 0) {
      os << "*x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

void divmod_k(const PolyK& dividend, const PolyK& divisor, PolyK* q, PolyK* r) {
  if (divisor.is_zero()) throw invariant_error("divmod_k by zero");
  const Int& m = divisor.m;
  std::vector<QuadElem> rem = dividend.c;
  int dq = dividend.degree() - divisor.degree();
  std::vector<QuadElem> quo(dq >= 0 ? dq + 1 : 0);
  QuadElem inv = q_inv(divisor.lc(), m);
  for (int i = int(rem.size()) - 1; i >= divisor.degree(); --i) {
    if (rem[i].is_zero()) continue;
    QuadElem f = q_mul(rem[i], inv, m);
    quo[i - divisor.degree()] = f;
    for (int j = 0; j <= divisor.degree(); ++j)
      rem[i - divisor.degree() + j] =
          q_sub(rem[i - divisor.degree() + j], q_mul(f, divisor.c[j], m));
  }
  if (q) *q = PolyK(m, std::move(quo));
  if (r) *r = PolyK(m, std::move(rem));
}

PolyK gcd_k(const PolyK& a, const PolyK& b) {
  PolyK x = a, y = b;
  while (!y.is_zero()) {
    PolyK r;
    divmod_k(x, y, nullptr, &r);
    x = y;
    y = r;
  }
  return x.monic();
}

PolyK mulmod_k(const PolyK& a, const PolyK& b, const PolyK& mod) {
  PolyK r;
  divmod_k(a * b, mod, nullptr, &r);
  return r;
}

std::optional<PolyK> invmod_k(const PolyK& a, const PolyK& h) {
  const Int& m = h.m;
  PolyK r0, r1 = h;
  divmod_k(a, h, nullptr, &r0);
  std::swap(r0, r1);  // r0 = h, r1 = a mod h
  PolyK s0(m, {}), s1(m, {QuadElem{Rat(1), Rat(0)}});
  while (!r1.is_zero()) {
    PolyK q, r;
    divmod_k(r0, r1, &q, &r);
    PolyK s2 = s0 - q * s1;
    r0 = r1;
    r1 = r;
    s0 = s1;
    s1 = s2;
  }
  if (r0.degree() != 0) return std::nullopt;
  QuadElem inv = q_inv(r0.lc(), m);
  std::vector<QuadElem> v;
  v.reserve(s0.c.size());
  for (const auto& x : s0.c) v.push_back(q_mul(x, inv, m));
  PolyK out(m, std::move(v));
  PolyK red;
  divmod_k(out, h, nullptr, &red);
  return red;
}

PolyK compose_mod_k(const PolyK& f, const PolyK& u, const PolyK& h) {
  PolyK res(h.m, {});
  for (std::size_t i = f.c.size(); i-- > 0;) {
    res = mulmod_k(res, u, h);
    res = res + PolyK(h.m, {f.c[i]});
    PolyK red;
    divmod_k(res, h, nullptr, &red);
    res = red;
  }
  return res;
}

std::vector<PolyK> factor_irreducible_over_K(const QuadField& K, const PolyZ& g) {
  const Int m = K.m();
  PolyK gk = PolyK::from_z(m, g).monic();
  if (g.degree() <= 0) return {gk};
  // An odd-degree polynomial irreducible over Q stays irreducible over a
  // quadratic field.
  if (g.degree() % 2 == 1) return {gk};

  for (long shift = 1; shift <= 64; ++shift) {
    // B(x) = g(x + shift*sqrt(m)), computed by Horner composition.
    PolyK lin(m, {QuadElem{Rat(0), Rat(shift)}, QuadElem{Rat(1), Rat(0)}});
    PolyK B(m, {});
    for (std::size_t i = g.c.size(); i-- > 0;) {
      B = B * lin;
      B = B + PolyK(m, {q_from_rat(Rat(g.c[i]))});
    }
    // Norm N = B * conj(B) is rational of degree 2 deg g.
    PolyK Nk = B * B.conj();
    if (!Nk.is_rational()) throw invariant_error("norm not rational");
    PolyQ Nq = Nk.rational_part();
    // Need N squarefree for the gcd construction to separate factors.
    PolyZ Nz = Nq.primitive_z();
    {
      PolyQ der = PolyQ::from_z(Nz.derivative());
      if (gcd_q(PolyQ::from_z(Nz), der).degree() != 0) continue;
    }
    auto zf = factor_poly_q(Nz);
    if (zf.factors.size() == 1) return {gk};
    if (zf.factors.size() > 2)
      throw invariant_error("norm of an irreducible polynomial split into >2 parts");
    std::vector<PolyK> out;
    PolyK lin_back(m, {QuadElem{Rat(0), Rat(-shift)}, QuadElem{Rat(1), Rat(0)}});
    for (const auto& fac : zf.factors) {
      PolyK Ci = gcd_k(B, PolyK::from_z(m, fac.factor));
      if (Ci.degree() <= 0 || Ci.degree() >= g.degree())
        throw invariant_error("norm factor gcd has unexpected degree");
      // Shift back: H(x) = C(x - shift*sqrt(m)).
      PolyK H(m, {});
      for (std::size_t i = Ci.c.size(); i-- > 0;) {
        H = H * lin_back;
        H = H + PolyK(m, {Ci.c[i]});
      }
      out.push_back(H.monic());
    }
    if (out.size() == 2 && !(out[0].conj().monic() == out[1]))
      throw invariant_error("K-factors of a rational polynomial are not conjugate");
    return out;
  }
  throw capability_error("factor_irreducible_over_K: no squarefree shift found");
}

}  // namespace finemu
