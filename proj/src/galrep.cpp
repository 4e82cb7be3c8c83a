#include "finemu/galrep.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace finemu {

const char* to_string(TriState t) {
  switch (t) {
    case TriState::Holds: return "Holds";
    case TriState::Fails: return "Fails";
    case TriState::Unknown: return "Unknown";
  }
  return "?";
}

const char* to_string(RedStatus s) {
  return s == RedStatus::Irreducible ? "Irreducible" : "Reducible";
}

const char* to_string(RedShape s) {
  switch (s) {
    case RedShape::Split: return "Split";
    case RedShape::Indecomposable: return "Indecomposable";
    case RedShape::Unknown: return "Unknown";
  }
  return "?";
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::In: return "In";
    case Membership::Out: return "Out";
    case Membership::Unknown: return "Unknown";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Division polynomials.

namespace {

PolyZ poly_const(const Int& v) { return PolyZ(std::vector<Int>{v}); }

}  // namespace

PolyZ division_polynomial(const Curve& E, const Int& p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw std::domain_error("division polynomial requires an odd prime");
  if (p > 13) throw capability_error("division polynomial: p above supported bound 13");
  long n = to_long_checked(p, "division polynomial index");

  // Work with the x-only encoding f_k (the full division polynomial is f_k for
  // odd k and f_k * (2y + a1 x + a3) for even k); the square of the latter
  // factor reduces to doubling_denom on the curve.
  PolyZ B = doubling_denom(E);
  PolyZ B2 = B * B;
  std::vector<PolyZ> f(std::size_t(n + 1));
  f[1] = poly_const(1);
  f[2] = poly_const(1);
  if (n >= 3) f[3] = PolyZ(std::vector<Int>{E.b8, 3 * E.b6, 3 * E.b4, E.b2, Int(3)});
  if (n >= 4)
    f[4] = PolyZ(std::vector<Int>{E.b4 * E.b8 - E.b6 * E.b6, E.b2 * E.b8 - E.b4 * E.b6,
                                  10 * E.b8, 10 * E.b6, 5 * E.b4, E.b2, Int(2)});
  for (long k = 5; k <= n; ++k) {
    long m = k / 2;
    auto& F = f;
    if (k % 2 == 1) {
      PolyZ cube_m = F[m] * F[m] * F[m];
      PolyZ cube_m1 = F[m + 1] * F[m + 1] * F[m + 1];
      if (m % 2 == 0)
        F[k] = B2 * F[m + 2] * cube_m - F[m - 1] * cube_m1;
      else
        F[k] = F[m + 2] * cube_m - B2 * F[m - 1] * cube_m1;
    } else {
      F[k] = F[m] * (F[m + 2] * F[m - 1] * F[m - 1] - F[m - 2] * F[m + 1] * F[m + 1]);
    }
  }
  PolyZ psi = f[std::size_t(n)];
  if (psi.degree() != int((n * n - 1) / 2) || psi.lc() != p)
    throw invariant_error("division polynomial failed its shape check");
  return psi;
}

PolyZ doubling_numer(const Curve& E) {
  return PolyZ(std::vector<Int>{-E.b8, -2 * E.b6, -E.b4, Int(0), Int(1)});
}

PolyZ doubling_denom(const Curve& E) {
  return PolyZ(std::vector<Int>{E.b6, 2 * E.b4, E.b2, Int(4)});
}

namespace {

// Remainder of a*b mod h over Q.
PolyQ mulmod_q(const PolyQ& a, const PolyQ& b, const PolyQ& h) {
  PolyQ q, r;
  divmod_q(a * b, h, &q, &r);
  return r;
}

}  // namespace

bool doubling_closed_q(const Curve& E, const PolyZ& h) {
  if (h.degree() < 1) return false;
  PolyQ hq = PolyQ::from_z(h).monic();
  PolyQ q, r;
  divmod_q(PolyQ::from_z(doubling_denom(E)), hq, &q, &r);
  if (r.is_zero()) return false;  // shares a root with the 2-torsion locus
  PolyQ s, t;
  PolyQ g = xgcd_q(r, hq, &s, &t);
  if (g.degree() != 0) return false;
  // g is monic, so g = 1 and s inverts r mod h.
  PolyQ num;
  divmod_q(PolyQ::from_z(doubling_numer(E)), hq, &q, &num);
  PolyQ u = mulmod_q(num, s, hq);
  // Evaluate h at u modulo h (Horner); zero iff roots map into roots.
  PolyQ acc;
  for (int i = hq.degree(); i >= 0; --i) {
    acc = mulmod_q(acc, u, hq);
    acc = acc + PolyQ(std::vector<Rat>{hq.c[std::size_t(i)]});
  }
  return acc.is_zero();
}

bool doubling_closed_k(const Curve& E, const QuadField& K, const PolyK& h) {
  if (h.degree() < 1) return false;
  const Int m = K.m();
  PolyK hm = h.monic();
  PolyK q, r;
  divmod_k(PolyK::from_z(m, doubling_denom(E)), hm, &q, &r);
  if (r.is_zero()) return false;
  auto inv = invmod_k(r, hm);
  if (!inv) return false;
  PolyK num;
  divmod_k(PolyK::from_z(m, doubling_numer(E)), hm, &q, &num);
  PolyK u = mulmod_k(num, *inv, hm);
  PolyK image = compose_mod_k(hm, u, hm);
  return image.is_zero();
}

// ---------------------------------------------------------------------------
// Point arithmetic over K.

namespace {

QuadElem qe(const Rat& a) { return QuadElem{a, Rat(0)}; }

}  // namespace

bool point_on_curve(const Curve& E, const PointK& P, const Int& m) {
  // y^2 + a1 x y + a3 y - (x^3 + a2 x^2 + a4 x + a6) == 0
  QuadElem x = P.x, y = P.y;
  QuadElem lhs = q_mul(y, y, m);
  lhs = q_add(lhs, q_mul(q_mul(qe(Rat(E.a1)), x, m), y, m));
  lhs = q_add(lhs, q_mul(qe(Rat(E.a3)), y, m));
  QuadElem rhs = q_mul(q_mul(x, x, m), x, m);
  rhs = q_add(rhs, q_mul(qe(Rat(E.a2)), q_mul(x, x, m), m));
  rhs = q_add(rhs, q_mul(qe(Rat(E.a4)), x, m));
  rhs = q_add(rhs, qe(Rat(E.a6)));
  return q_sub(lhs, rhs).is_zero();
}

PointK point_negate(const Curve& E, const PointK& P) {
  // -(x, y) = (x, -y - a1 x - a3); the a1-term is a rational scalar multiple.
  QuadElem ny{-P.y.a - Rat(E.a1) * P.x.a - Rat(E.a3), -P.y.b - Rat(E.a1) * P.x.b};
  return PointK{P.x, ny};
}

std::optional<PointK> point_add(const Curve& E, const std::optional<PointK>& P,
                                const std::optional<PointK>& Q, const Int& m) {
  if (!P) return Q;
  if (!Q) return P;
  const QuadElem &x1 = P->x, &y1 = P->y, &x2 = Q->x, &y2 = Q->y;
  QuadElem lambda, nu;
  if (!(x1 == x2)) {
    QuadElem dx = q_sub(x2, x1);
    QuadElem di = q_inv(dx, m);
    lambda = q_mul(q_sub(y2, y1), di, m);
    nu = q_mul(q_sub(q_mul(y1, x2, m), q_mul(y2, x1, m)), di, m);
  } else {
    if (q_sub(y2, point_negate(E, *P).y).is_zero()) return std::nullopt;  // Q == -P
    // duplication
    QuadElem den = q_add(q_add(q_add(y1, y1), q_mul(qe(Rat(E.a1)), x1, m)), qe(Rat(E.a3)));
    if (den.is_zero()) return std::nullopt;  // 2-torsion point
    QuadElem di = q_inv(den, m);
    QuadElem x1sq = q_mul(x1, x1, m);
    QuadElem x1cube = q_mul(x1sq, x1, m);
    QuadElem numl = q_add(q_mul(qe(Rat(3)), x1sq, m),
                          q_add(q_mul(qe(Rat(2 * E.a2)), x1, m),
                                q_sub(qe(Rat(E.a4)), q_mul(qe(Rat(E.a1)), y1, m))));
    lambda = q_mul(numl, di, m);
    QuadElem numn = q_sub(q_add(q_mul(qe(Rat(E.a4)), x1, m),
                                q_sub(qe(Rat(2 * E.a6)), q_mul(qe(Rat(E.a3)), y1, m))),
                          x1cube);
    nu = q_mul(numn, di, m);
  }
  QuadElem x3 = q_sub(q_sub(q_add(q_mul(lambda, lambda, m), q_mul(qe(Rat(E.a1)), lambda, m)),
                            qe(Rat(E.a2))),
                      q_add(x1, x2));
  QuadElem y3 = q_sub(q_sub(QuadElem{Rat(0), Rat(0)},
                            q_mul(q_add(lambda, qe(Rat(E.a1))), x3, m)),
                      q_add(nu, qe(Rat(E.a3))));
  return PointK{x3, y3};
}

std::optional<PointK> point_mul(const Curve& E, long k, const std::optional<PointK>& P,
                                const Int& m) {
  if (!P) return std::nullopt;
  std::optional<PointK> base = P;
  if (k < 0) {
    base = point_negate(E, *P);
    k = -k;
  }
  std::optional<PointK> acc;  // identity
  while (k > 0) {
    if (k & 1) acc = point_add(E, acc, base, m);
    k >>= 1;
    if (k > 0) base = point_add(E, base, base, m);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// p-torsion.

std::string torsion_group_str(const TorsionReport& t) {
  std::ostringstream os;
  if (t.rank == 0) return "trivial";
  os << "Z/" << t.p.get_str();
  if (t.rank == 2) os << " x Z/" << t.p.get_str();
  return os.str();
}

namespace {

bool rat_less(const Rat& a, const Rat& b) { return cmp(a, b) < 0; }

bool quadelem_less(const QuadElem& x, const QuadElem& y) {
  if (x.a != y.a) return rat_less(x.a, y.a);
  return rat_less(x.b, y.b);
}

// y-coordinates over K at a given x, if any: solutions of
// y^2 + (a1 x + a3) y - (x^3 + a2 x^2 + a4 x + a6) = 0, whose discriminant is
// doubling_denom(x).
std::optional<PointK> lift_point(const Curve& E, const QuadField* K, const QuadElem& x,
                                 const Int& m) {
  PolyK Bk = PolyK::from_z(m, doubling_denom(E));
  QuadElem disc = Bk.evaluate(x);
  QuadElem s;
  if (K) {
    auto root = sqrt_in_K(*K, disc);
    if (!root) return std::nullopt;
    s = *root;
  } else {
    if (!disc.is_rational()) throw invariant_error("rational torsion search left Q");
    auto root = sqrt_rat(disc.a);
    if (!root) return std::nullopt;
    s = qe(*root);
  }
  // y = (-(a1 x + a3) + s) / 2
  QuadElem lin = q_add(q_mul(qe(Rat(E.a1)), x, m), qe(Rat(E.a3)));
  QuadElem y = q_sub(s, lin);
  y.a /= 2;
  y.b /= 2;
  return PointK{x, y};
}

TorsionReport torsion_impl(const Curve& E, const QuadField* K, const Int& p) {
  PolyZ psi = division_polynomial(E, p);
  const Int m = K ? K->m() : Int(-1);
  BoundedFactorization bf = factor_upto_degree(psi, K ? 2 : 1);

  std::vector<QuadElem> xs;
  for (const PolyZ& fac : bf.factors) {
    if (fac.degree() == 1) {
      xs.push_back(qe(Rat(-fac.coeff(0), fac.coeff(1))));
    } else if (K && fac.degree() == 2) {
      // roots (-b +- sqrt(b^2-4ac)) / (2a) for a x^2 + b x + c
      Int a = fac.coeff(2), b = fac.coeff(1), c = fac.coeff(0);
      Int disc = b * b - 4 * a * c;
      auto s = sqrt_in_K(*K, qe(Rat(disc)));
      if (!s) continue;
      QuadElem twoa = qe(Rat(2 * a));
      QuadElem r1 = q_mul(q_sub(*s, qe(Rat(b))), q_inv(twoa, m), m);
      QuadElem r2 = q_mul(q_sub(QuadElem{Rat(0), Rat(0)}, q_add(*s, qe(Rat(b)))),
                          q_inv(twoa, m), m);
      xs.push_back(r1);
      xs.push_back(r2);
    }
  }
  std::sort(xs.begin(), xs.end(), quadelem_less);

  std::vector<PointK> pts;
  for (const QuadElem& x : xs) {
    auto P = lift_point(E, K, x, m);
    if (P) pts.push_back(*P);
  }

  TorsionReport out;
  out.p = p;
  long n = to_long_checked(p, "torsion order");
  long count = long(pts.size());  // distinct x-coordinates with points over the field
  if (count == 0) {
    out.rank = 0;
    return out;
  }
  if (count == (n - 1) / 2)
    out.rank = 1;
  else if (count == (n * n - 1) / 2)
    out.rank = 2;
  else
    throw invariant_error("torsion point count is not a subgroup size");

  for (const PointK& P : pts)
    if (!point_on_curve(E, P, m)) throw invariant_error("torsion lift left the curve");

  const PointK& P1 = pts.front();
  if (point_mul(E, n, P1, m)) throw invariant_error("torsion generator not killed by p");
  out.generators.push_back(P1);
  if (out.rank == 2) {
    std::vector<QuadElem> orbit_x;
    std::optional<PointK> acc;
    for (long k = 1; k <= (n - 1) / 2; ++k) {
      acc = point_add(E, acc, std::optional<PointK>(P1), m);
      if (!acc) throw invariant_error("torsion generator has order below p");
      orbit_x.push_back(acc->x);
    }
    for (const PointK& P : pts) {
      bool inside = false;
      for (const QuadElem& x : orbit_x)
        if (P.x == x) inside = true;
      if (inside) continue;
      if (point_mul(E, n, P, m)) throw invariant_error("torsion generator not killed by p");
      out.generators.push_back(P);
      break;
    }
    if (out.generators.size() != 2) throw invariant_error("independent torsion generator not found");
  }
  return out;
}

}  // namespace

TorsionReport p_torsion_over_q(const Curve& E, const Int& p) { return torsion_impl(E, nullptr, p); }

TorsionReport p_torsion_over_k(const Curve& E, const QuadField& K, const Int& p) {
  return torsion_impl(E, &K, p);
}

// ---------------------------------------------------------------------------
// Stable lines.

namespace {

bool poly_z_less_local(const PolyZ& a, const PolyZ& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.c.size(); i-- > 0;)
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  return false;
}

bool polyk_less(const PolyK& a, const PolyK& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.c.size(); i-- > 0;) {
    if (!(a.c[i] == b.c[i])) return quadelem_less(a.c[i], b.c[i]);
  }
  return false;
}

// Enumerate subsets of `pool` with degree sum exactly `target`, calling visit
// on each product candidate; deterministic order, hard budget.
template <typename Poly, typename DegFn, typename MulFn, typename Visit>
void subset_products(const std::vector<Poly>& pool, int target, const Poly& one, DegFn deg,
                     MulFn mul, Visit visit) {
  long budget = 1L << 20;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t, int, const Poly&)> dfs = [&](std::size_t start, int sum,
                                                               const Poly& prod) {
    if (--budget < 0) throw capability_error("stable line search budget exceeded");
    if (sum == target) {
      visit(prod);
      return;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
      int d = deg(pool[i]);
      if (sum + d > target) continue;
      chosen.push_back(i);
      dfs(i + 1, sum + d, mul(prod, pool[i]));
      chosen.pop_back();
    }
  };
  dfs(0, 0, one);
}

}  // namespace

std::vector<PolyZ> stable_lines_q(const Curve& E, const Int& p) {
  PolyZ psi = division_polynomial(E, p);
  long n = to_long_checked(p, "p");
  int target = int((n - 1) / 2);
  BoundedFactorization bf = factor_upto_degree(psi, target);
  std::vector<PolyZ> out;
  PolyZ one = poly_const(1);
  subset_products(
      bf.factors, target, one, [](const PolyZ& f) { return f.degree(); },
      [](const PolyZ& a, const PolyZ& b) { return a * b; },
      [&](const PolyZ& cand) {
        if (doubling_closed_q(E, cand)) out.push_back(cand);
      });
  std::sort(out.begin(), out.end(), poly_z_less_local);
  return out;
}

std::vector<StableLine> stable_lines_k(const Curve& E, const QuadField& K, const Int& p) {
  PolyZ psi = division_polynomial(E, p);
  long n = to_long_checked(p, "p");
  int target = int((n - 1) / 2);
  const Int m = K.m();
  BoundedFactorization bf = factor_upto_degree(psi, 2 * target);

  // Pool of K-irreducible factors of the division polynomial with degree
  // small enough to divide a kernel polynomial.
  std::vector<PolyK> pool;
  for (const PolyZ& fac : bf.factors) {
    if (fac.degree() % 2 == 0) {
      auto halves = factor_irreducible_over_K(K, fac);
      if (halves.size() == 2) {
        for (auto& g : halves)
          if (g.degree() <= target) pool.push_back(g.monic());
        continue;
      }
    }
    if (fac.degree() <= target) pool.push_back(PolyK::from_z(m, fac).monic());
  }
  std::sort(pool.begin(), pool.end(), polyk_less);

  std::vector<StableLine> out;
  PolyK onek(m, {QuadElem{Rat(1), Rat(0)}});
  subset_products(
      pool, target, onek, [](const PolyK& f) { return f.degree(); },
      [](const PolyK& a, const PolyK& b) { return a * b; },
      [&](const PolyK& cand) {
        if (!doubling_closed_k(E, K, cand)) return;
        StableLine L;
        L.hk = cand;
        L.rational = cand.is_rational();
        if (L.rational) L.h = cand.rational_part().primitive_z();
        out.push_back(L);
      });
  std::sort(out.begin(), out.end(), [](const StableLine& x, const StableLine& y) {
    if (x.rational != y.rational) return x.rational;
    return polyk_less(x.hk, y.hk);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Characters.

namespace {

Int prime_to_p_part(const Int& n, const Int& p) {
  Int k = abs(n);
  while (k % p == 0) k /= p;
  return k;
}

void require_same_frame(const ModPCharacter& a, const ModPCharacter& b) {
  if (a.p != b.p || a.modulus != b.modulus)
    throw invariant_error("character operation on mismatched modulus or residue prime");
}

std::vector<Int> sorted_divisors(const Int& n) {
  Factorization fz = factorize(n);
  std::vector<Int> divs{Int(1)};
  for (const auto& [q, e] : fz.exponents) {
    std::size_t sz = divs.size();
    Int qk = 1;
    for (unsigned long i = 1; i <= e; ++i) {
      qk *= q;
      for (std::size_t j = 0; j < sz; ++j) divs.push_back(divs[j] * qk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

}  // namespace

ModPCharacter trivial_character(const Int& p, const Int& M) {
  if (M < 1 || M > 1000000) throw capability_error("character modulus out of working range");
  ModPCharacter chi;
  chi.p = p;
  chi.modulus = M;
  chi.known = true;
  for (Int n = 1; n <= M; ++n)
    if (gcd(n, M) == 1) chi.values[n % M] = 1;
  if (M == 1) chi.values[0] = 1;  // the unique class mod 1
  return chi;
}

ModPCharacter cyclotomic_character(const Int& p, const Int& M) {
  if (M % p != 0) throw invariant_error("cyclotomic character needs p | modulus");
  ModPCharacter chi = trivial_character(p, M);
  for (auto& [n, v] : chi.values) v = n % p;
  return chi;
}

Int char_value(const ModPCharacter& chi, const Int& n) {
  if (!chi.known) throw invariant_error("value of an undetermined character");
  Int cls = ((n % chi.modulus) + chi.modulus) % chi.modulus;
  auto it = chi.values.find(cls);
  if (it == chi.values.end()) throw std::domain_error("character value at a non-unit class");
  return it->second;
}

ModPCharacter char_mul(const ModPCharacter& a, const ModPCharacter& b) {
  require_same_frame(a, b);
  ModPCharacter out = a;
  out.known = a.known && b.known;
  if (out.known)
    for (auto& [n, v] : out.values) v = (v * b.values.at(n)) % a.p;
  return out;
}

ModPCharacter char_inverse(const ModPCharacter& chi) {
  ModPCharacter out = chi;
  if (!chi.known) return out;
  unsigned long pv = chi.p.get_ui();
  for (auto& [n, v] : out.values) v = Int(invmod_u64(v.get_ui() % pv, pv));
  return out;
}

Int char_conductor(const ModPCharacter& chi) {
  if (!chi.known) throw invariant_error("conductor of an undetermined character");
  for (const Int& f : sorted_divisors(chi.modulus)) {
    bool trivial_on_kernel = true;
    for (const auto& [n, v] : chi.values) {
      if (n % f == 1 % f && v != 1) {
        trivial_on_kernel = false;
        break;
      }
    }
    if (trivial_on_kernel) return f;
  }
  throw invariant_error("conductor search fell through");
}

Int char_value_primitive(const ModPCharacter& chi, const Int& n) {
  Int c = char_conductor(chi);
  if (c == 1) return 1;
  Int nn = ((n % c) + c) % c;
  if (gcd(nn, c) != 1) throw std::domain_error("primitive character value at a ramified class");
  // Lift to a class coprime to the full modulus.
  Int a = nn;
  while (gcd(a, chi.modulus) != 1) a += c;
  return chi.values.at(a % chi.modulus);
}

bool char_unramified_at(const ModPCharacter& chi, const Int& ell) {
  return char_conductor(chi) % ell != 0;
}

bool char_restriction_trivial_at(const ModPCharacter& chi, const Int& ell) {
  if (!char_unramified_at(chi, ell)) return false;
  return char_value_primitive(chi, ell) == 1;
}

bool char_equal(const ModPCharacter& a, const ModPCharacter& b) {
  if (!a.known || !b.known) return false;
  if (a.p != b.p) return false;
  Int ca = char_conductor(a), cb = char_conductor(b);
  if (ca != cb) return false;
  for (Int n = 1; n <= ca; ++n)
    if (gcd(n, ca) == 1 && char_value_primitive(a, n) != char_value_primitive(b, n)) return false;
  return true;
}

bool char_trivial_over(const ModPCharacter& chi, const QuadField& K) {
  if (!chi.known) throw invariant_error("triviality test on an undetermined character");
  Int c = char_conductor(chi);
  if (c == 1) return true;
  Int dk = abs(K.disc);
  if (c != dk) return false;
  for (Int n = 1; n <= c; ++n) {
    if (gcd(n, c) != 1) continue;
    int kro = kronecker(K.disc, n);
    Int expect = kro == 1 ? Int(1) : chi.p - 1;
    if (char_value_primitive(chi, n) != expect) return false;
  }
  return true;
}

std::string char_str(const ModPCharacter& chi) {
  if (!chi.known) return "unknown";
  Int c = char_conductor(chi);
  if (c == 1) return "1";
  // chibar: conductor p, value at n is n mod p.
  if (c == chi.p) {
    bool cyc = true;
    for (Int n = 1; n < chi.p && cyc; ++n)
      if (n % chi.p != 0 && char_value_primitive(chi, n) != n % chi.p) cyc = false;
    if (cyc) return "chibar";
  }
  bool quadratic = true;
  for (const auto& [n, v] : chi.values)
    if (v != 1 && v != chi.p - 1) quadratic = false;
  std::ostringstream os;
  if (quadratic)
    os << "quadratic character of conductor " << c.get_str();
  else
    os << "character of conductor " << c.get_str();
  return os.str();
}

// ---------------------------------------------------------------------------
// Kernel characters.

namespace {

// Multiplicative order of r in F_p^x / {+-1}.
unsigned long order_mod_signs(const Int& r, const Int& p) {
  Int x = ((r % p) + p) % p;
  if (x == 0) throw invariant_error("order of zero");
  Int acc = x;
  unsigned long k = 1;
  while (!(acc == 1 || acc == p - 1)) {
    acc = (acc * x) % p;
    ++k;
  }
  return k;
}

}  // namespace

ModPCharacter kernel_character_aux(const Curve& E, const PolyZ& h, const Int& p, long lo,
                                   long hi) {
  Int N = conductor(E);
  Int M = p * prime_to_p_part(N, p);
  if (M > 1000000) throw capability_error("character modulus out of working range");
  ModPCharacter chi;
  chi.p = p;
  chi.modulus = M;
  chi.known = false;

  unsigned long pu = p.get_ui();
  unsigned long inv2 = invmod_u64(2 % pu, pu);

  std::map<Int, Int> resolved;
  resolved[Int(1) % M] = 1;
  for (std::uint32_t lp : small_primes()) {
    if (long(lp) <= lo) continue;
    if (long(lp) > hi) break;
    Int ell(lp);
    if ((p * N) % ell == 0) continue;
    Int a = ap(E, ell);
    // Frobenius eigenvalues: roots of x^2 - a x + ell mod p.
    Int disc = ((a * a - 4 * ell) % p + p) % p;
    std::int64_t s = sqrtmod_u64(disc.get_ui(), pu);
    if (s < 0)
      throw invariant_error("no Frobenius eigenvalue mod p at an auxiliary prime");
    Int am = ((a % p) + p) % p;
    Int r1 = (am + s) % p * inv2 % p;
    Int r2 = ((am - s) % p + p) % p * inv2 % p;
    Int val;
    if (r1 == r2) {
      val = r1;
    } else {
      if (h.lc() % ell == 0) continue;
      PolyFp hf = PolyFp::reduce(h, lp);
      if (hf.degree() != h.degree() || !is_squarefree_fp(hf)) continue;
      auto facs = factor_poly_fp(hf);
      int d = facs.front().factor.degree();
      bool uniform = true;
      for (const auto& f : facs)
        if (f.factor.degree() != d) uniform = false;
      if (!uniform) continue;
      bool m1 = order_mod_signs(r1, p) == (unsigned long)d;
      bool m2 = order_mod_signs(r2, p) == (unsigned long)d;
      if (m1 == m2) continue;
      val = m1 ? r1 : r2;
    }
    if (val == 0) throw invariant_error("kernel character value zero");
    Int cls = ell % M;
    auto it = resolved.find(cls);
    if (it != resolved.end()) {
      if (it->second != val)
        throw invariant_error("kernel character inconsistent across auxiliary primes");
    } else {
      resolved[cls] = val;
    }
  }

  // Multiplicative closure of the resolved classes inside (Z/M)^x.
  std::map<Int, Int> full = resolved;
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::pair<Int, Int>> snapshot(full.begin(), full.end());
    for (const auto& [a, va] : snapshot) {
      for (const auto& [b, vb] : resolved) {
        Int c = (a * b) % M;
        Int v = (va * vb) % p;
        auto it = full.find(c);
        if (it == full.end()) {
          full[c] = v;
          grew = true;
        } else if (it->second != v) {
          throw invariant_error("kernel character closure conflict");
        }
      }
    }
  }

  unsigned long units = 0;
  for (Int n = 1; n <= M; ++n)
    if (gcd(n, M) == 1) ++units;
  if (full.size() == units) {
    chi.known = true;
    chi.values = std::move(full);
  }
  return chi;
}

ModPCharacter kernel_character(const Curve& E, const PolyZ& h, const Int& p) {
  // A line spanned by a point rational over Q carries the trivial character.
  BoundedFactorization bf = factor_upto_degree(h, 1);
  PolyQ Bq = PolyQ::from_z(doubling_denom(E));
  for (const PolyZ& fac : bf.factors) {
    if (fac.degree() != 1) continue;
    Rat x0(-fac.coeff(0), fac.coeff(1));
    x0.canonicalize();
    if (is_square_rat(Bq.evaluate(x0))) {
      Int N = conductor(E);
      return trivial_character(p, p * prime_to_p_part(N, p));
    }
  }
  return kernel_character_aux(E, h, p, 0, 200);
}

// ---------------------------------------------------------------------------
// The residual report.

bool rhobar_ramified_at_multiplicative(const Curve& E, const Int& ell, const Int& p) {
  if (ell == p) throw std::domain_error("ramification rule needs ell != p");
  LocalData L = tate_local_data(E, ell);
  if (L.reduction != ReductionType::SplitMult && L.reduction != ReductionType::NonSplitMult)
    throw std::domain_error("ramification rule needs multiplicative reduction");
  return Int(L.vdisc) % p != 0;
}

ResidualReport residual_report(const Curve& E, const QuadField& K, const Int& p) {
  ResidualReport R;
  R.p = p;
  R.lines = stable_lines_k(E, K, p);
  R.torsion_k = p_torsion_over_k(E, K, p);
  R.status = R.lines.empty() ? RedStatus::Irreducible : RedStatus::Reducible;

  if (R.status == RedStatus::Reducible) {
    if (R.torsion_k.rank == 2 || R.lines.size() >= 2)
      R.shape = RedShape::Split;
    else
      R.shape = RedShape::Indecomposable;  // line search is exhaustive
  } else {
    R.shape = RedShape::Unknown;
  }

  // Diagonal characters, via a line already stable over Q.
  R.phi_known = false;
  std::vector<ModPCharacter> rational_chars;
  for (const StableLine& L : R.lines)
    if (L.rational) rational_chars.push_back(kernel_character(E, L.h, p));
  const ModPCharacter* pick = nullptr;
  for (const ModPCharacter& c : rational_chars)
    if (c.known && char_conductor(c) == 1) pick = &c;  // prefer the trivial sub
  if (!pick)
    for (const ModPCharacter& c : rational_chars)
      if (c.known) {
        pick = &c;
        break;
      }
  if (pick) {
    R.phi_known = true;
    R.phi1 = *pick;
    R.phi2 = char_mul(cyclotomic_character(p, R.phi1.modulus), char_inverse(R.phi1));
  }

  // Residual conductor exponents away from p.
  for (const Int& ell : bad_primes(E)) {
    if (ell == p) continue;
    LocalData L = tate_local_data(E, ell);
    if (L.reduction == ReductionType::SplitMult || L.reduction == ReductionType::NonSplitMult) {
      R.residual_exponent[ell] =
          rhobar_ramified_at_multiplicative(E, ell, p) ? 1ul : 0ul;
    } else if (L.reduction == ReductionType::Additive) {
      if (ell >= 5)
        R.residual_exponent[ell] = 2ul;  // tame additive: no inertia invariants mod p
      else
        R.residual_exponent[ell] = std::nullopt;  // wild place: undetermined
    }
  }
  return R;
}

// ---------------------------------------------------------------------------
// Sigma sets.

std::vector<SigmaEntry> sigma_set(const Curve& E, const QuadField& K, const Int& p) {
  std::vector<SigmaEntry> out;
  for (const Int& ell : bad_primes(E)) {
    if (ell == p) continue;
    SigmaEntry entry;
    entry.ell = ell;
    PrimeOfK v = prime_above(K, ell);
    entry.splitting = v.type;
    entry.num_places = v.g;

    LocalDataK R = local_data_over_K(E, K, ell);
    if (!R.known) {
      entry.status = Membership::Unknown;
      entry.reason = "wild additive place: base-changed reduction data undetermined";
      out.push_back(entry);
      continue;
    }
    if (R.reduction == ReductionType::Good) {
      entry.status = Membership::Out;
      entry.reason = "good reduction over K: place does not divide N/Nbar";
      out.push_back(entry);
      continue;
    }
    if (R.reduction == ReductionType::Additive) {
      if (ell >= 5) {
        entry.status = Membership::Out;
        entry.reason = "tame additive over K: conductor and residual conductor exponents agree";
      } else {
        entry.status = Membership::Unknown;
        entry.reason = "wild additive place: residual conductor exponent undetermined";
      }
      out.push_back(entry);
      continue;
    }

    // Multiplicative over K.
    bool unramified = (Int(R.n) % p) == 0;
    if (!unramified) {
      entry.status = Membership::Out;
      entry.reason = "mod-p representation ramified at the place (p does not divide the "
                     "multiplicative valuation)";
      out.push_back(entry);
      continue;
    }
    bool mu_here = mu_p_in_completion(v, p);
    if (p >= 5 && mu_here && R.reduction != ReductionType::SplitMult) {
      entry.status = Membership::Out;
      entry.reason = "mu_p lies in K_v but reduction is not split multiplicative";
      out.push_back(entry);
      continue;
    }
    if (p == 3 && mu_here && R.reduction != ReductionType::SplitMult) {
      // additive was excluded above, so only non-split multiplicative lands here
      entry.status = Membership::Out;
      entry.reason = "mu_3 lies in K_v but reduction is non-split multiplicative";
      out.push_back(entry);
      continue;
    }
    entry.status = Membership::In;
    entry.reason = mu_here
                       ? "divides N/Nbar with split multiplicative reduction and mu_p in K_v"
                       : "divides N/Nbar; mu_p not in K_v so no splitness condition applies";
    out.push_back(entry);
  }
  return out;
}

std::vector<Int> sigma_phi2_set(const ResidualReport& report, const Curve& E, const Int& p) {
  if (report.shape != RedShape::Indecomposable)
    throw std::domain_error("quotient-character place set requires an indecomposable report");
  if (!report.phi_known)
    throw std::domain_error("quotient-character place set requires a determined character");
  std::vector<Int> out;
  for (const Int& ell : bad_primes(E)) {
    if (ell == p) continue;
    if (char_restriction_trivial_at(report.phi2, ell)) out.push_back(ell);
  }
  return out;
}

TriState hida_rubin_condition(const ResidualReport& report, const QuadField& K, const Int& p) {
  if (report.status != RedStatus::Reducible)
    throw std::domain_error("two-character condition requires a reducible representation");
  if (splitting_type(K, p) != SplitType::Split) return TriState::Fails;
  if (!report.phi_known) return TriState::Unknown;
  if (char_restriction_trivial_at(report.phi1, p)) return TriState::Fails;
  ModPCharacter ratio =
      char_mul(report.phi1, char_inverse(cyclotomic_character(p, report.phi1.modulus)));
  if (char_restriction_trivial_at(ratio, p)) return TriState::Fails;
  return TriState::Holds;
}

}  // namespace finemu
