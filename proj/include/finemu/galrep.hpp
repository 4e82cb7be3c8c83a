#pragma once
// Mod-p representation analysis for elliptic curves over Q and over an
// imaginary quadratic field K: division polynomials, p-torsion fields,
// Galois-stable isogeny kernels, the diagonal characters of a reducible
// representation, ramification bookkeeping for the residual conductor, and
// the derived sets of places feeding the theorem engine.
#include "finemu/ellcurve.hpp"
#include "finemu/poly.hpp"
#include "finemu/quadfield.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace finemu {

// Three-valued logic for hypothesis checks: a check either certifies, refutes,
// or cannot decide (and the engine must stay conservative on Unknown).
enum class TriState { Holds, Fails, Unknown };
const char* to_string(TriState t);

// ---------------------------------------------------------------------------
// Division polynomials and the duplication map.

// The p-division polynomial in x for odd p: vanishes exactly at the
// x-coordinates of the nonzero p-torsion points.  Degree (p^2-1)/2, leading
// coefficient p.  Supported: p in {3,5,7,11,13}; larger odd primes throw
// capability_error, non-odd-prime p throws domain_error.
PolyZ division_polynomial(const Curve& E, const Int& p);

// x(2P) = doubling_numer(x) / doubling_denom(x) on x-coordinates.
// doubling_denom = 4x^3 + b2 x^2 + 2 b4 x + b6 (vanishes on 2-torsion x's).
PolyZ doubling_numer(const Curve& E);
PolyZ doubling_denom(const Curve& E);

// True iff h (nonconstant, squarefree, coprime to the 2-torsion locus) has its
// root set carried into itself by the duplication map on x-coordinates.
bool doubling_closed_q(const Curve& E, const PolyZ& h);
bool doubling_closed_k(const Curve& E, const QuadField& K, const PolyK& h);

// ---------------------------------------------------------------------------
// p-torsion over Q and over K.

// Affine point with coordinates in K (both coordinates rational iff the
// irrational parts are zero).
struct PointK {
  QuadElem x, y;
};

bool point_on_curve(const Curve& E, const PointK& P, const Int& m);
PointK point_negate(const Curve& E, const PointK& P);
// Group law; std::nullopt is the point at infinity.  m is the field kernel
// (K.m(), or any nonsquare for purely rational work).
std::optional<PointK> point_add(const Curve& E, const std::optional<PointK>& P,
                                const std::optional<PointK>& Q, const Int& m);
std::optional<PointK> point_mul(const Curve& E, long k, const std::optional<PointK>& P,
                                const Int& m);

struct TorsionReport {
  Int p;
  int rank = 0;  // the p-torsion over the field is (Z/p)^rank
  std::vector<PointK> generators;  // `rank` independent points of exact order p
};
std::string torsion_group_str(const TorsionReport& t);  // "trivial" | "Z/p" | "Z/p x Z/p"

TorsionReport p_torsion_over_q(const Curve& E, const Int& p);
TorsionReport p_torsion_over_k(const Curve& E, const QuadField& K, const Int& p);

// ---------------------------------------------------------------------------
// Galois-stable lines (p-isogeny kernels).

// A Galois-stable line of E[p] over K, represented by its kernel polynomial
// (the monic polynomial whose roots are the x-coordinates of the nonzero
// points of the line).  `rational` marks lines already stable over Q; for
// those, h is the integer kernel polynomial and hk its image in K[x].
struct StableLine {
  bool rational = false;
  PolyZ h;    // meaningful iff rational
  PolyK hk;   // always set; degree (p-1)/2, monic
};

// Kernel polynomials of all Q-stable lines (monic degree-(p-1)/2 factors of
// the division polynomial whose roots are closed under duplication).
std::vector<PolyZ> stable_lines_q(const Curve& E, const Int& p);
// All K-stable lines, including the Galois-conjugate pairs not defined over Q.
std::vector<StableLine> stable_lines_k(const Curve& E, const QuadField& K, const Int& p);

// ---------------------------------------------------------------------------
// Dirichlet characters with values in F_p^x.

// A homomorphism (Z/M)^x -> F_p^x, tabulated on every residue class coprime
// to M.  `known` is false when the determination procedure could not pin the
// character down (consumers must degrade gracefully).
struct ModPCharacter {
  Int p;
  Int modulus;
  bool known = false;
  std::map<Int, Int> values;  // residue coprime to modulus -> value in [1, p-1]
};

ModPCharacter trivial_character(const Int& p, const Int& M);
// The mod-p cyclotomic character as a Dirichlet character mod M (requires p | M):
// value at a is a mod p.
ModPCharacter cyclotomic_character(const Int& p, const Int& M);

Int char_value(const ModPCharacter& chi, const Int& n);  // n coprime to modulus
ModPCharacter char_mul(const ModPCharacter& a, const ModPCharacter& b);
ModPCharacter char_inverse(const ModPCharacter& chi);
bool char_equal(const ModPCharacter& a, const ModPCharacter& b);  // as primitive characters
// Smallest f | M through which the character factors.
Int char_conductor(const ModPCharacter& chi);
// Value of the associated primitive character at n coprime to the conductor
// (n need not be coprime to M).
Int char_value_primitive(const ModPCharacter& chi, const Int& n);
bool char_unramified_at(const ModPCharacter& chi, const Int& ell);
// True iff ell splits completely in the cyclic field cut out by chi:
// unramified at ell and primitive value 1.  This is "chi restricted to a
// decomposition group at ell is trivial".
bool char_restriction_trivial_at(const ModPCharacter& chi, const Int& ell);
// True iff chi restricted to G_K is trivial, i.e. chi is either trivial or
// the quadratic character attached to K.
bool char_trivial_over(const ModPCharacter& chi, const QuadField& K);
std::string char_str(const ModPCharacter& chi);  // "1", "chibar", descriptive otherwise

// The character through which Galois acts on a stable line with kernel
// polynomial h: determined at auxiliary good primes ell (<= 200) from the
// Frobenius eigenvalue pair of x^2 - a_ell x + ell mod p, with the two-fold
// ambiguity broken by the factorization degree pattern of h mod ell, then
// completed multiplicatively on (Z/M)^x.  M = p times the prime-to-p part of
// the conductor.  Returns known=false when the auxiliary primes do not
// generate the full unit group or leave an ambiguity.
ModPCharacter kernel_character(const Curve& E, const PolyZ& h, const Int& p);
// Same, restricted to auxiliary primes in (lo, hi] and without the
// rational-point shortcut (exposed so independence of the auxiliary prime
// set is testable).
ModPCharacter kernel_character_aux(const Curve& E, const PolyZ& h, const Int& p, long lo, long hi);

// ---------------------------------------------------------------------------
// The residual representation report.

enum class RedStatus { Irreducible, Reducible };
enum class RedShape { Split, Indecomposable, Unknown };
const char* to_string(RedStatus s);
const char* to_string(RedShape s);

struct ResidualReport {
  Int p;
  RedStatus status = RedStatus::Irreducible;
  RedShape shape = RedShape::Unknown;      // meaningful when Reducible
  std::vector<StableLine> lines;           // all K-stable lines
  TorsionReport torsion_k;                 // p-torsion over K
  bool phi_known = false;
  ModPCharacter phi1, phi2;                // phi1 phi2 = chibar when known
  // Exponent of the prime-to-p residual Artin conductor at each bad prime
  // ell != p of the minimal model; nullopt where undetermined (wild additive).
  std::map<Int, std::optional<unsigned long>> residual_exponent;
};

ResidualReport residual_report(const Curve& E, const QuadField& K, const Int& p);

// True iff the mod-p representation is ramified at a multiplicative prime
// ell != p, i.e. p does not divide v_ell(Delta_min) (Tate curve criterion).
// domain_error unless E is multiplicative at ell and ell != p.
bool rhobar_ramified_at_multiplicative(const Curve& E, const Int& ell, const Int& p);

// ---------------------------------------------------------------------------
// The Sigma sets of the splitting hypotheses.

enum class Membership { In, Out, Unknown };
const char* to_string(Membership m);

// Classification of the places of K above one bad rational prime ell != p.
// The defining conditions are Galois-stable, so the places above ell share
// one status; num_places records how many there are.
struct SigmaEntry {
  Int ell;
  int num_places = 1;
  SplitType splitting = SplitType::Inert;
  Membership status = Membership::Unknown;
  std::string reason;
};

// The set Sigma of places v not dividing p such that (1) v divides N/Nbar,
// (2) if p >= 5 and mu_p is contained in K_v the reduction at v is split
// multiplicative, (3) if p = 3 and mu_p is contained in K_v the reduction is
// split multiplicative or additive.  One entry per bad rational prime
// ell != p, with Unknown where the local analysis is out of range.
std::vector<SigmaEntry> sigma_set(const Curve& E, const QuadField& K, const Int& p);

// The set Sigma(phi2): rational primes ell != p of bad reduction where the
// quotient character phi2 restricted to a decomposition group at ell is
// trivial.  domain_error unless report.shape == Indecomposable and phi2 is
// known (the set only feeds the indecomposable-case hypothesis).
std::vector<Int> sigma_phi2_set(const ResidualReport& report, const Curve& E, const Int& p);

// The two-character condition at a split p: Holds iff p = v vbar splits in K
// and phi1 restricted to the decomposition groups at both v and vbar is
// neither trivial nor equal to chibar there.  Fails when p does not split or
// a restriction test fails; Unknown when the characters are not known.
// domain_error unless report.status == Reducible.
TriState hida_rubin_condition(const ResidualReport& report, const QuadField& K, const Int& p);

}  // namespace finemu
