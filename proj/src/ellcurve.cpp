#include "finemu/ellcurve.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace finemu {

namespace {

Int mod_lift(const Int& x, const Int& m) {
  Int r = x % m;
  if (r < 0) r += m;
  return r;
}

unsigned long vml(const Int& x, const Int& ell) {
  return x == 0 ? ~0UL : valuation(x, ell);
}

}  // namespace

Curve::Curve(const Int& a1_, const Int& a2_, const Int& a3_, const Int& a4_, const Int& a6_)
    : a1(a1_), a2(a2_), a3(a3_), a4(a4_), a6(a6_) {
  b2 = a1 * a1 + 4 * a2;
  b4 = 2 * a4 + a1 * a3;
  b6 = a3 * a3 + 4 * a6;
  b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  c4 = b2 * b2 - 24 * b4;
  c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
  disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  if (4 * b8 != b2 * b6 - b4 * b4) throw invariant_error("b-invariant identity violated");
  if (c4 * c4 * c4 - c6 * c6 != 1728 * disc) throw invariant_error("c-invariant identity violated");
  if (disc == 0) throw std::domain_error("singular Weierstrass equation");
}

Curve Curve::from_ainvs(const std::vector<Int>& a) {
  if (a.size() != 5) throw std::domain_error("expected five coefficients [a1,a2,a3,a4,a6]");
  return Curve(a[0], a[1], a[2], a[3], a[4]);
}

Rat Curve::j() const {
  Rat num(c4 * c4 * c4);
  Rat r = num / Rat(disc);
  r.canonicalize();
  return r;
}

std::string Curve::ainvs_str() const {
  std::ostringstream os;
  os << "[" << a1 << "," << a2 << "," << a3 << "," << a4 << "," << a6 << "]";
  return os.str();
}

bool Curve::same_equation(const Curve& o) const {
  return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 && a6 == o.a6;
}

std::optional<Curve> transform(const Curve& E, const Rat& u, const Rat& r, const Rat& s,
                               const Rat& t) {
  if (u == 0) throw std::domain_error("coordinate change requires u != 0");
  Rat u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  Rat A1 = (Rat(E.a1) + 2 * s) / u;
  Rat A2 = (Rat(E.a2) - s * Rat(E.a1) + 3 * r - s * s) / u2;
  Rat A3 = (Rat(E.a3) + r * Rat(E.a1) + 2 * t) / u3;
  Rat A4 = (Rat(E.a4) - s * Rat(E.a3) + 2 * r * Rat(E.a2) - (t + r * s) * Rat(E.a1) + 3 * r * r -
            2 * s * t) /
           u4;
  Rat A6 = (Rat(E.a6) + r * Rat(E.a4) + r * r * Rat(E.a2) + r * r * r - t * Rat(E.a3) - t * t -
            r * t * Rat(E.a1)) /
           u6;
  for (Rat* x : {&A1, &A2, &A3, &A4, &A6}) {
    x->canonicalize();
    if (x->get_den() != 1) return std::nullopt;
  }
  return Curve(A1.get_num(), A2.get_num(), A3.get_num(), A4.get_num(), A6.get_num());
}

Curve transform_z(const Curve& E, const Int& u, const Int& r, const Int& s, const Int& t) {
  auto C = transform(E, Rat(u), Rat(r), Rat(s), Rat(t));
  if (!C) throw invariant_error("integral coordinate change produced non-integral result");
  return *C;
}

namespace {

// Admissibility of a scaled invariant pair at 2 (the residue conditions are
// stable under scaling by odd sixth powers, so testing with only the 2-part
// removed is equivalent to testing the final pair).
bool admissible_at_2(const Int& c4s, const Int& c6s) {
  if (mod_lift(c6s, 4) == 3) return true;
  return vml(c4s, 2) >= 4 && (mod_lift(c6s, 32) == 0 || mod_lift(c6s, 32) == 8);
}

}  // namespace

Curve minimal_model(const Curve& E) {
  // Largest admissible scaling factor, prime by prime.
  Int g = gcd(gcd(abs(E.c4), abs(E.c6)), abs(E.disc));
  Int u = 1;
  if (g > 1) {
    for (const auto& [ell, ge] : factorize(g).exponents) {
      unsigned long bound = vml(E.disc, ell) / 12;
      if (E.c4 != 0) bound = std::min(bound, vml(E.c4, ell) / 4);
      if (E.c6 != 0) bound = std::min(bound, vml(E.c6, ell) / 6);
      unsigned long e = bound;
      if (ell == 2) {
        while (e > 0 && !admissible_at_2(E.c4 / pow_int(Int(2), 4 * e),
                                         E.c6 / pow_int(Int(2), 6 * e)))
          --e;
      } else if (ell == 3) {
        while (e > 0 && E.c6 != 0 && vml(E.c6, 3) - 6 * e == 2) --e;
      }
      u *= pow_int(ell, e);
    }
  }
  Int c4s = E.c4 / pow_int(u, 4);
  Int c6s = E.c6 / pow_int(u, 6);

  // Reconstruct the unique reduced model with these invariants.
  for (long b2c : {-4L, -3L, 0L, 1L, 4L, 5L}) {
    Int b2(b2c);
    if ((b2 * b2 - c4s) % 24 != 0) continue;
    Int b4 = (b2 * b2 - c4s) / 24;
    Int num6 = -b2 * b2 * b2 + 36 * b2 * b4 - c6s;
    if (num6 % 216 != 0) continue;
    Int b6 = num6 / 216;
    Int a1 = mod_lift(b2, 2);
    Int a3 = mod_lift(b6, 2);
    if ((b2 - a1) % 4 != 0 || (b6 - a3) % 4 != 0 || (b4 - a1 * a3) % 2 != 0) continue;
    Curve M(a1, (b2 - a1) / 4, a3, (b4 - a1 * a3) / 2, (b6 - a3) / 4);
    if (M.c4 != c4s || M.c6 != c6s) continue;
    if (M.disc * pow_int(u, 12) != E.disc) throw invariant_error("scaling mismatch in reduction");
    return M;
  }
  throw invariant_error("no reduced model exists for the scaled invariants");
}

const char* to_string(ReductionType t) {
  switch (t) {
    case ReductionType::Good: return "Good";
    case ReductionType::SplitMult: return "SplitMult";
    case ReductionType::NonSplitMult: return "NonSplitMult";
    case ReductionType::Additive: return "Additive";
  }
  return "?";
}

std::vector<Int> bad_primes(const Curve& E) {
  Curve M = minimal_model(E);
  std::vector<Int> out;
  for (const auto& [ell, e] : factorize(abs(M.disc)).exponents) out.push_back(ell);
  std::sort(out.begin(), out.end());
  return out;
}

Int conductor(const Curve& E) {
  Int N = 1;
  for (const Int& ell : bad_primes(E)) N *= pow_int(ell, tate_local_data(E, ell).f);
  return N;
}

// ---------------------------------------------------------------------------
// Traces of Frobenius.

namespace {

Int ap_brute_small(const Curve& M, const Int& ell) {
  // Direct point count over the residue field, any prime.
  long l = to_long_checked(ell, "prime");
  long count = 1;  // point at infinity
  for (long x = 0; x < l; ++x)
    for (long y = 0; y < l; ++y) {
      Int F = Int(y) * y + M.a1 * x * y + M.a3 * y - (Int(x) * x * x + M.a2 * x * x + M.a4 * x + M.a6);
      if (F % ell == 0) ++count;
    }
  return ell + 1 - count;
}

Int ap_charsum(const Curve& M, const Int& ell) {
  // Odd ell: complete the square and sum quadratic characters of the cubic.
  unsigned long l = static_cast<unsigned long>(to_long_checked(ell, "prime"));
  std::vector<signed char> chi(l, -1);
  chi[0] = 0;
  for (unsigned long x = 1; x < l; ++x) chi[mulmod_u64(x, x, l)] = 1;
  unsigned long B2 = static_cast<unsigned long>(to_long_checked(mod_lift(M.b2, ell), "residue"));
  unsigned long B4 = static_cast<unsigned long>(to_long_checked(mod_lift(2 * M.b4, ell), "residue"));
  unsigned long B6 = static_cast<unsigned long>(to_long_checked(mod_lift(M.b6, ell), "residue"));
  long sum = 0;
  for (unsigned long x = 0; x < l; ++x) {
    unsigned long fx = mulmod_u64(x, x, l);
    unsigned long v = mulmod_u64(4, mulmod_u64(fx, x, l), l);
    v = (v + mulmod_u64(B2, fx, l)) % l;
    v = (v + mulmod_u64(B4, x, l)) % l;
    v = (v + B6) % l;
    sum += chi[v];
  }
  return Int(-sum);
}

// Short-model arithmetic y^2 = x^3 + Ax + B over F_l (l > 3).
struct ShortCurve {
  unsigned long l, A, B;
};
using PointFp = std::optional<std::pair<unsigned long, unsigned long>>;

PointFp pt_neg(const ShortCurve& C, const PointFp& P) {
  if (!P) return P;
  return std::make_pair(P->first, (C.l - P->second) % C.l);
}

PointFp pt_add(const ShortCurve& C, const PointFp& P, const PointFp& Q) {
  if (!P) return Q;
  if (!Q) return P;
  unsigned long l = C.l;
  auto [x1, y1] = *P;
  auto [x2, y2] = *Q;
  unsigned long lam;
  if (x1 == x2) {
    if ((y1 + y2) % l == 0) return std::nullopt;
    unsigned long num = (mulmod_u64(3, mulmod_u64(x1, x1, l), l) + C.A) % l;
    lam = mulmod_u64(num, invmod_u64(2 * y1 % l, l), l);
  } else {
    unsigned long num = (y2 + l - y1) % l;
    unsigned long den = (x2 + l - x1) % l;
    lam = mulmod_u64(num, invmod_u64(den, l), l);
  }
  unsigned long x3 = (mulmod_u64(lam, lam, l) + 2 * l - x1 - x2) % l;
  unsigned long y3 = (mulmod_u64(lam, (x1 + l - x3) % l, l) + l - y1) % l;
  return std::make_pair(x3, y3);
}

PointFp pt_mul(const ShortCurve& C, Int k, PointFp P) {
  if (k < 0) {
    k = -k;
    P = pt_neg(C, P);
  }
  PointFp R = std::nullopt;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) R = pt_add(C, R, P);
    P = pt_add(C, P, P);
    k >>= 1;
  }
  return R;
}

// All m in [lo, hi] with m P = O, via baby-step giant-step; returns the exact
// order of P (which divides every group order in the window).
Int point_order_in_window(const ShortCurve& C, const PointFp& P, const Int& lo, const Int& hi) {
  Int W = hi - lo + 1;
  Int s0 = sqrt(W) + 1;
  unsigned long s = static_cast<unsigned long>(to_long_checked(s0, "step count"));
  std::map<std::pair<unsigned long, unsigned long>, unsigned long> baby;
  PointFp Q = std::nullopt;
  for (unsigned long j = 0; j < s; ++j) {
    if (Q && baby.find(*Q) == baby.end()) baby[*Q] = j;
    if (j > 0 && !Q) {
      // tiny order dividing j
      Int g(j);
      for (const auto& [p, e] : factorize(g).exponents)
        for (unsigned long i = 0; i < e; ++i)
          if (!pt_mul(C, g / p, P)) g /= p;
      return g;
    }
    Q = pt_add(C, Q, P);
  }
  PointFp G = pt_mul(C, Int(s), P);
  PointFp R = pt_mul(C, lo, P);
  std::vector<Int> matches;
  for (Int k = 0; lo + k * s <= hi + s0; ++k) {
    if (!R) {
      Int m = lo + k * s;
      if (m >= lo && m <= hi) matches.push_back(m);
    } else {
      PointFp Rn = pt_neg(C, R);
      auto it = baby.find(*Rn);
      if (it != baby.end()) {
        Int m = lo + k * s + Int(it->second);
        if (m >= lo && m <= hi) matches.push_back(m);
      }
    }
    R = pt_add(C, R, G);
  }
  if (matches.empty()) throw invariant_error("no annihilator found in the expected window");
  Int g = 0;
  for (const Int& m : matches) g = gcd(g, m);
  for (const auto& [p, e] : factorize(g).exponents)
    for (unsigned long i = 0; i < e; ++i)
      if (!pt_mul(C, g / p, P)) g /= p;
  if (pt_mul(C, g, P)) throw invariant_error("order refinement failed");
  return g;
}

// Candidate group orders: multiples of the accumulated exponent in the window.
std::vector<Int> order_candidates(const Int& expo, const Int& lo, const Int& hi) {
  std::vector<Int> out;
  Int start = ((lo + expo - 1) / expo) * expo;
  for (Int m = start; m <= hi; m += expo) out.push_back(m);
  return out;
}

Int group_order_bsgs(const ShortCurve& C, const Int& lo, const Int& hi, SplitMix64& rng,
                     std::vector<Int>* candidates_out) {
  Int expo = 1;
  std::vector<Int> cands;
  for (int tries = 0; tries < 64; ++tries) {
    unsigned long x = rng.below(C.l);
    unsigned long fx =
        (mulmod_u64(x, mulmod_u64(x, x, C.l), C.l) + mulmod_u64(C.A, x, C.l) + C.B) % C.l;
    PointFp P;
    if (fx == 0)
      P = std::make_pair(x, 0UL);
    else {
      long y = sqrtmod_u64(fx, C.l);
      if (y < 0) continue;
      P = std::make_pair(x, static_cast<unsigned long>(y));
    }
    Int o = point_order_in_window(C, P, lo, hi);
    expo = lcm(expo, o);
    cands = order_candidates(expo, lo, hi);
    if (cands.size() <= 1) break;
  }
  if (cands.empty()) throw invariant_error("empty candidate set for group order");
  if (candidates_out) *candidates_out = cands;
  return cands.front();
}

}  // namespace

Int ap_exhaustive(const Curve& E, const Int& ell) {
  Curve M = minimal_model(E);
  if (vml(M.disc, ell) > 0) throw std::domain_error("trace requested at a prime of bad reduction");
  if (ell > 100000) throw capability_error("exhaustive point count limited to ell <= 10^5");
  if (ell <= 3) return ap_brute_small(M, ell);
  return ap_charsum(M, ell);
}

Int ap_bsgs(const Curve& E, const Int& ell) {
  Curve M = minimal_model(E);
  if (vml(M.disc, ell) > 0) throw std::domain_error("trace requested at a prime of bad reduction");
  if (ell <= 500) throw std::domain_error("order search requires ell > 500");
  if (ell >= (Int(1) << 31)) throw capability_error("prime too large for order search");
  unsigned long l = static_cast<unsigned long>(to_long_checked(ell, "prime"));

  // y^2 = x^3 - 27 c4 x - 54 c6 is isomorphic to M over F_l (l > 3).
  unsigned long A = static_cast<unsigned long>(to_long_checked(mod_lift(-27 * M.c4, ell), "residue"));
  unsigned long B = static_cast<unsigned long>(to_long_checked(mod_lift(-54 * M.c6, ell), "residue"));
  ShortCurve C{l, A, B};
  Int s = sqrt(Int(4) * ell) + 1;
  Int lo = ell + 1 - s, hi = ell + 1 + s;
  SplitMix64 rng(0x9E3779B97F4A7C15ULL ^ l);

  std::vector<Int> cands;
  group_order_bsgs(C, lo, hi, rng, &cands);
  if (cands.size() > 1) {
    // Disambiguate with the quadratic twist: the two orders sum to 2l + 2.
    unsigned long u0 = 2;
    while (sqrtmod_u64(u0 % l, l) >= 0) ++u0;
    unsigned long u2 = mulmod_u64(u0, u0, l);
    ShortCurve Ct{l, mulmod_u64(A, u2, l), mulmod_u64(B, mulmod_u64(u2, u0, l), l)};
    std::vector<Int> candsT;
    group_order_bsgs(Ct, lo, hi, rng, &candsT);
    std::vector<Int> joint;
    for (const Int& c : cands)
      for (const Int& ct : candsT)
        if (c + ct == 2 * ell + 2) joint.push_back(c);
    std::sort(joint.begin(), joint.end());
    joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
    if (joint.size() != 1)
      throw capability_error("group order disambiguation failed at this prime");
    cands = joint;
  }
  Int a = ell + 1 - cands.front();
  if (a * a > 4 * ell) throw invariant_error("trace outside the admissible interval");
  return a;
}

Int ap(const Curve& E, const Int& ell) {
  if (!is_prime(ell)) throw std::domain_error("trace of Frobenius requires a prime");
  if (ell < 10000) return ap_exhaustive(E, ell);
  return ap_bsgs(E, ell);
}

Curve quadratic_twist(const Curve& E, const Int& d) {
  if (d == 0) throw std::domain_error("twist parameter must be nonzero");
  Int d0 = squarefree_kernel(abs(d));
  if (d < 0) d0 = -d0;
  Curve W(0, 0, 0, -27 * d0 * d0 * E.c4, -54 * d0 * d0 * d0 * E.c6);
  return minimal_model(W);
}

// ---------------------------------------------------------------------------
// Base change of local data to K_v.

namespace {

bool is_local_square_q(const Int& x, const Int& ell) {
  // Is the nonzero rational integer x a square in the ell-adic field?
  if (x == 0) throw invariant_error("square test on zero");
  unsigned long v = valuation(x, ell);
  if (v % 2 != 0) return false;
  Int u = x / pow_int(ell, v);
  if (ell == 2) return mod_lift(u, 8) == 1;
  return kronecker(u, ell) == 1;
}

bool is_square_in_ramified_completion(const Int& x, const Int& m, const Int& ell) {
  // K_v = Q_ell(sqrt(m)), ramified.  Rational x is a square there iff x or
  // x*m is a square in Q_ell.
  return is_local_square_q(x, ell) || is_local_square_q(x * m, ell);
}

std::string double_index_label(long n) {
  std::ostringstream os;
  os << "I" << 2 * n;
  return os.str();
}

}  // namespace

LocalDataK local_data_over_K(const Curve& E, const QuadField& K, const Int& ell) {
  LocalData L = tate_local_data(E, ell);
  LocalDataK R;
  R.v = prime_above(K, ell);

  switch (R.v.type) {
    case SplitType::Split:
      R.known = true;
      R.reduction = L.reduction;
      R.kodaira = L.kodaira;
      R.f = L.f;
      if (L.reduction == ReductionType::SplitMult || L.reduction == ReductionType::NonSplitMult)
        R.n = L.n;
      return R;

    case SplitType::Inert:
      R.known = true;
      R.kodaira = L.kodaira;
      R.f = L.f;
      // The nodal tangent character is the unramified quadratic one, which
      // dies in the quadratic extension of the residue field.
      R.reduction =
          L.reduction == ReductionType::NonSplitMult ? ReductionType::SplitMult : L.reduction;
      if (L.reduction == ReductionType::SplitMult || L.reduction == ReductionType::NonSplitMult)
        R.n = L.n;
      return R;

    case SplitType::Ramified:
      break;
  }

  const Int m = K.m();
  if (L.reduction == ReductionType::Good) {
    R.known = true;
    R.reduction = ReductionType::Good;
    R.kodaira = "I0";
    R.f = 0;
    return R;
  }
  if (L.reduction == ReductionType::SplitMult || L.reduction == ReductionType::NonSplitMult) {
    // Residue field does not grow; the node index doubles.
    Curve M = minimal_model(E);
    R.known = true;
    R.kodaira = double_index_label(L.n);
    R.n = 2 * L.n;
    R.f = 1;
    bool split;
    if (ell == 2)
      split = is_square_in_ramified_completion(-M.c6, m, ell);
    else
      split = kronecker(-M.c6, ell) == 1;
    R.reduction = split ? ReductionType::SplitMult : ReductionType::NonSplitMult;
    return R;
  }

  // Additive reduction.
  if (ell == 2 || ell == 3) {
    R.known = false;  // wild ramified base change is out of working range
    return R;
  }

  // Tame case: test the three nontrivial twist classes for a semistable twist.
  unsigned long u0 = 2;
  {
    unsigned long l = static_cast<unsigned long>(to_long_checked(ell, "prime"));
    while (sqrtmod_u64(u0 % l, l) >= 0) ++u0;
  }
  const std::vector<Int> classes{Int(u0), ell, Int(Int(u0) * ell)};
  for (const Int& d : classes) {
    Curve Ed = quadratic_twist(E, d);
    LocalData Ld = tate_local_data(Ed, ell);
    if (Ld.reduction == ReductionType::Additive) continue;

    // Over the ramified completion every rational class has even valuation,
    // so the twist character restricted to K_v is unramified: trivial iff
    // d * m is a square in Q_ell.
    bool trivial = is_local_square_q(d * m, ell);
    R.known = true;
    if (Ld.reduction == ReductionType::Good) {
      R.reduction = ReductionType::Good;  // unramified quadratic twists keep good reduction
      R.kodaira = "I0";
      R.f = 0;
      return R;
    }
    bool split_d = kronecker(-Ed.c6, ell) == 1;  // over K_v: same residue field
    bool split = trivial ? split_d : !split_d;
    R.reduction = split ? ReductionType::SplitMult : ReductionType::NonSplitMult;
    R.kodaira = double_index_label(Ld.n);
    R.n = 2 * Ld.n;
    R.f = 1;
    return R;
  }

  // Potentially good with inertia of order 3, 4, or 6: stays additive.
  R.known = true;
  R.reduction = ReductionType::Additive;
  R.kodaira = "";
  R.f = 2;
  return R;
}

}  // namespace finemu
