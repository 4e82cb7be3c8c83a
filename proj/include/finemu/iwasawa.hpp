#pragma once
// Exact structure-theorem bookkeeping for finitely generated modules over the
// one-variable Iwasawa algebra: mu/lambda invariants, mu-multiplicity,
// distinguished polynomials, and an independent truncated-ring verification
// of the mod-p corank formula.
#include "finemu/arith.hpp"

#include <string>
#include <vector>

namespace finemu {

// A module presented by the structure theorem as
//   Lambda^r (+) (+)_{i<s} Lambda/(p^{mu_i}) (+) (+)_{j<t} Lambda/(f_j(T)),
// with every mu_i > 0 and every f_j distinguished (monic with all non-leading
// coefficients divisible by p).  Polynomial coefficients are stored
// lowest-degree first.
struct LambdaPresentation {
  long r = 0;
  std::vector<unsigned long> muParts;
  std::vector<std::vector<Int>> fParts;
};

// True iff f (lowest-degree first, nonempty) is monic and every non-leading
// coefficient is divisible by p.
bool is_distinguished(const std::vector<Int>& f, const Int& p);

// Enforces the structural invariants: r >= 0, every mu_i > 0, every f_j
// distinguished for p.  Throws std::domain_error on violation.
void validate_presentation(const LambdaPresentation& P, const Int& p);

// Sum of the mu_i (0 when there are no p-power summands).
Int mu_invariant(const LambdaPresentation& P);
// s: the number of p-power cyclic summands.
std::size_t mu_multiplicity(const LambdaPresentation& P);
// Sum of the degrees of the f_j.
Int lambda_invariant(const LambdaPresentation& P);

// Corank of M/pM over F_p[[T]]: r + s.  The complementary finite part of
// M/pM is (+)_j F_p[T]/(T^{deg f_j}); mod_p_finite_part lists those
// truncation degrees (the mod-p image of a distinguished polynomial is
// exactly T^deg).
long mod_p_corank(const LambdaPresentation& P);
std::vector<unsigned long> mod_p_finite_part(const LambdaPresentation& P);

// Independent check of mod_p_corank: materializes each summand of M/pM
// inside the truncated ring (Z/p^a)[T]/(T^N), computes F_p-dimensions at
// truncation orders N and N-1 by Gaussian elimination on the relation
// matrices, and infers the free corank as the dimension difference.  Returns
// whether the inferred value equals mod_p_corank(P).  Precision guards:
// requires a > max mu_i and N > lambda + 2 (capability_error otherwise).
bool verify_corank_oracle(const LambdaPresentation& P, const Int& p,
                          unsigned long a, unsigned long N);

// JSON ingestion.  Schema: {"r": 1, "mu": [2, 1], "f": [[5, 10, 1], ...]}
// with polynomial coefficients lowest-degree first as integers.  A file may
// hold one such object or an array of them (a regression corpus).  Both
// throw std::domain_error on schema violations or invalid presentations.
LambdaPresentation parse_presentation(const std::string& json_text, const Int& p);
std::vector<LambdaPresentation> parse_presentation_file(const std::string& path, const Int& p);

}  // namespace finemu
