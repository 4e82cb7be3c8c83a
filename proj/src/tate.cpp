// Local reduction data via Tate's algorithm, valid at every prime including
// 2 and 3.  Conductor exponents come from the discriminant/component-count
// relation, which also covers the wild part at 2 and 3.
#include "finemu/ellcurve.hpp"
#include "finemu/poly.hpp"

#include <climits>
#include <sstream>

namespace finemu {

namespace {

constexpr unsigned long VINF = ULONG_MAX;

unsigned long vml(const Int& x, const Int& ell) {
  return x == 0 ? VINF : valuation(x, ell);
}

Int mod_lift(const Int& x, const Int& m) {
  Int r = x % m;
  if (r < 0) r += m;
  return r;
}

Int inv_mod(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), mod_lift(a, m).get_mpz_t(), m.get_mpz_t()) == 0)
    throw invariant_error("modular inverse does not exist");
  return r;
}

// Is the unit u a square in the completion at ell?
bool unit_square_local(const Int& u, const Int& ell) {
  if (ell == 2) return mod_lift(u, 8) == 1;
  return kronecker(u, ell) == 1;
}

std::string kodaira_In(long n, bool starred) {
  std::ostringstream os;
  os << "I" << n;
  if (starred) os << "*";
  return os.str();
}

LocalData make_result(const Int& ell, const std::string& kod, unsigned long m,
                      ReductionType red, unsigned long vd, long n) {
  LocalData d;
  d.ell = ell;
  d.kodaira = kod;
  if (vd + 1 < m) throw invariant_error("component count exceeds discriminant valuation");
  d.f = vd - m + 1;
  d.reduction = red;
  d.vdisc = vd;
  d.n = n;
  return d;
}

// Move the singular point of the reduction mod ell to (0,0).
Curve translate_singular_point(const Curve& E, const Int& ell) {
  Int x0 = 0, y0 = 0;
  if (ell <= 3) {
    bool found = false;
    for (Int x = 0; x < ell && !found; ++x) {
      for (Int y = 0; y < ell && !found; ++y) {
        Int F = y * y + E.a1 * x * y + E.a3 * y - (x * x * x + E.a2 * x * x + E.a4 * x + E.a6);
        Int Fx = E.a1 * y - (3 * x * x + 2 * E.a2 * x + E.a4);
        Int Fy = 2 * y + E.a1 * x + E.a3;
        if (F % ell == 0 && Fx % ell == 0 && Fy % ell == 0) {
          x0 = x;
          y0 = y;
          found = true;
        }
      }
    }
    if (!found) throw invariant_error("singular point not found in residue field");
  } else {
    // Additive reduction: the cusp sits at the triple root of the quartic-free
    // cubic, x0 = -b2/12.
    x0 = mod_lift(-E.b2 * inv_mod(12, ell), ell);
    y0 = mod_lift(-(E.a1 * x0 + E.a3) * inv_mod(2, ell), ell);
  }
  Curve T = transform_z(E, 1, x0, 0, y0);
  if (vml(T.a3, ell) < 1 || vml(T.a4, ell) < 1 || vml(T.a6, ell) < 1)
    throw invariant_error("translation did not move the singular point to the origin");
  return T;
}

// Arrange v(a1)>=1, v(a2)>=1, v(a3)>=2, v(a4)>=2, v(a6)>=3 by a (s,t) change
// of variables.  Direct formulas for ell >= 5; a small search at 2 and 3.
Curve normalize_for_cubic(const Curve& E, const Int& ell) {
  auto ok = [&](const Curve& C) {
    return vml(C.a1, ell) >= 1 && vml(C.a2, ell) >= 1 && vml(C.a3, ell) >= 2 &&
           vml(C.a4, ell) >= 2 && vml(C.a6, ell) >= 3;
  };
  if (ell <= 3) {
    Int l2 = ell * ell, l3 = ell * ell * ell;
    for (Int s = 0; s < l2; ++s)
      for (Int t = 0; t < l3; ++t) {
        Curve C = transform_z(E, 1, 0, s, t);
        if (ok(C)) return C;
      }
    throw invariant_error("no (s,t) normalization exists at this prime");
  }
  Int s = mod_lift(-E.a1 * inv_mod(2, ell), ell);
  Int t = mod_lift(-E.a3 * inv_mod(2, ell * ell), ell * ell);
  Curve C = transform_z(E, 1, 0, s, t);
  if (!ok(C)) throw invariant_error("(s,t) normalization failed");
  return C;
}

// Roots (with multiplicity) of a monic cubic T^3 + c2 T^2 + c1 T + c0 mod ell.
// Returns the maximal multiplicity and a root attaining it (repeated roots of
// a cubic are always rational over the residue field).
struct CubicRoots {
  int max_mult = 0;
  Int root = 0;  // attaining max_mult; meaningful when max_mult >= 1
};

CubicRoots cubic_root_structure(const Int& c2, const Int& c1, const Int& c0, const Int& ell) {
  if (ell >= (Int(1) << 31)) throw capability_error("prime too large for residue cubic analysis");
  unsigned long l = static_cast<unsigned long>(to_long_checked(ell, "prime"));
  PolyFp P = PolyFp::reduce(PolyZ({c0, c1, c2, 1}), l);
  CubicRoots out;
  for (unsigned long r : roots_fp(P)) {
    PolyFp lin(l, {(l - r) % l, 1});  // T - r
    PolyFp q = P;
    int mult = 0;
    while (q.degree() >= 1) {
      PolyFp quo, rem;
      divmod_fp(q, lin, &quo, &rem);
      if (!rem.is_zero()) break;
      ++mult;
      q = quo;
    }
    if (mult > out.max_mult) {
      out.max_mult = mult;
      out.root = Int(r);
    }
  }
  return out;
}

Int exact_div(const Int& a, const Int& b) {
  if (a % b != 0) throw invariant_error("exact division failed");
  return a / b;
}

}  // namespace

LocalData tate_local_data(const Curve& E0, const Int& ell) {
  if (ell < 2 || !is_prime(ell)) throw std::domain_error("local data requires a prime");
  Curve E = minimal_model(E0);

  for (int round = 0; round < 64; ++round) {
    unsigned long vd = vml(E.disc, ell);
    if (vd == 0) return make_result(ell, "I0", 1, ReductionType::Good, 0, 0);

    if (vml(E.c4, ell) == 0) {
      // Nodal reduction; the tangent directions split according to -c6.
      long n = static_cast<long>(vd);
      if (ell == 2) {
        Int r = mod_lift(-E.c6, 8);
        if (r != 1 && r != 5)
          throw invariant_error("unexpected 2-adic class of -c6 for nodal reduction");
      }
      bool split = unit_square_local(-E.c6, ell);
      return make_result(ell, kodaira_In(n, false), static_cast<unsigned long>(n),
                         split ? ReductionType::SplitMult : ReductionType::NonSplitMult, vd, n);
    }

    E = translate_singular_point(E, ell);
    if (vml(E.a6, ell) < 2) return make_result(ell, "II", 1, ReductionType::Additive, vd, 0);
    if (vml(E.b8, ell) < 3) return make_result(ell, "III", 2, ReductionType::Additive, vd, 0);
    if (vml(E.b6, ell) < 3) return make_result(ell, "IV", 3, ReductionType::Additive, vd, 0);

    E = normalize_for_cubic(E, ell);
    Int l2 = ell * ell, l3 = l2 * ell;
    CubicRoots cr = cubic_root_structure(exact_div(E.a2, ell), exact_div(E.a4, l2),
                                         exact_div(E.a6, l3), ell);

    if (cr.max_mult <= 1)
      return make_result(ell, "I0*", 5, ReductionType::Additive, vd, 0);

    if (cr.max_mult == 2) {
      // Chain of blowups; each stage tests a residue quadratic.
      E = transform_z(E, 1, ell * cr.root, 0, 0);
      if (vml(E.a2, ell) != 1 || vml(E.a4, ell) < 3 || vml(E.a6, ell) < 4)
        throw invariant_error("double-root translation failed");
      long n = 1;
      unsigned long q = 2;
      while (true) {
        if (n > static_cast<long>(vd) + 3) throw invariant_error("blowup chain did not terminate");
        Int lq = pow_int(ell, q);
        Int a3q = exact_div(E.a3, lq);
        Int a6q = exact_div(E.a6, lq * lq);
        if (mod_lift(a3q * a3q + 4 * a6q, ell) != 0)
          return make_result(ell, kodaira_In(n, true), 5 + static_cast<unsigned long>(n),
                             ReductionType::Additive, vd, n);
        Int y1 = (ell == 2) ? mod_lift(a6q, 2) : mod_lift(-a3q * inv_mod(2, ell), ell);
        E = transform_z(E, 1, 0, 0, lq * y1);
        if (vml(E.a3, ell) < q + 1 || vml(E.a6, ell) < 2 * q + 1)
          throw invariant_error("vertical translation failed in blowup chain");
        ++n;

        Int a21 = exact_div(E.a2, ell);
        Int a4q = exact_div(E.a4, lq * ell);
        Int a6q2 = exact_div(E.a6, lq * lq * ell);
        if (mod_lift(a4q * a4q - 4 * a21 * a6q2, ell) != 0)
          return make_result(ell, kodaira_In(n, true), 5 + static_cast<unsigned long>(n),
                             ReductionType::Additive, vd, n);
        Int x1 = (ell == 2) ? mod_lift(a6q2 * a21, 2)
                            : mod_lift(-a4q * inv_mod(2 * a21, ell), ell);
        E = transform_z(E, 1, lq * x1, 0, 0);
        if (vml(E.a4, ell) < q + 2 || vml(E.a6, ell) < 2 * q + 2)
          throw invariant_error("horizontal translation failed in blowup chain");
        ++n;
        ++q;
      }
    }

    // Triple root.
    E = transform_z(E, 1, ell * cr.root, 0, 0);
    if (vml(E.a2, ell) < 2 || vml(E.a4, ell) < 3 || vml(E.a6, ell) < 4)
      throw invariant_error("triple-root translation failed");
    {
      Int a32 = exact_div(E.a3, l2);
      Int a64 = exact_div(E.a6, l2 * l2);
      if (mod_lift(a32 * a32 + 4 * a64, ell) != 0)
        return make_result(ell, "IV*", 7, ReductionType::Additive, vd, 0);
      Int y1 = (ell == 2) ? mod_lift(a64, 2) : mod_lift(-a32 * inv_mod(2, ell), ell);
      E = transform_z(E, 1, 0, 0, l2 * y1);
      if (vml(E.a3, ell) < 3 || vml(E.a6, ell) < 5)
        throw invariant_error("translation failed past the IV* test");
    }
    if (vml(E.a4, ell) < 4) return make_result(ell, "III*", 8, ReductionType::Additive, vd, 0);
    if (vml(E.a6, ell) < 6) return make_result(ell, "II*", 9, ReductionType::Additive, vd, 0);

    // Not minimal at ell: rescale and start over.
    if (vml(E.a1, ell) < 1 || vml(E.a2, ell) < 2 || vml(E.a3, ell) < 3 || vml(E.a4, ell) < 4 ||
        vml(E.a6, ell) < 6)
      throw invariant_error("rescaling conditions violated");
    E = Curve(exact_div(E.a1, ell), exact_div(E.a2, l2), exact_div(E.a3, l3),
              exact_div(E.a4, l2 * l2), exact_div(E.a6, l3 * l3));
  }
  throw invariant_error("reduction-type loop did not terminate");
}

}  // namespace finemu
