#pragma once
// The theorem engine: evaluates the hypothesis lists of the four vanishing
// results (the reducible-case criterion, its converse, the classical-mu
// corollary, and the congruence transfer), assembling module outputs and
// externally supplied facts into auditable certificates.
#include "finemu/arith.hpp"
#include "finemu/congruence.hpp"
#include "finemu/ellcurve.hpp"
#include "finemu/galrep.hpp"
#include "finemu/quadfield.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace finemu {

// ---------------------------------------------------------------------------
// External facts: literature inputs consumed, never derived.

enum class FactKind {
  FineMuZero,        // mu^fine(E/K^ac) = 0 for a named curve
  CotorsionAssumed,  // the p-primary fine Selmer group of a named curve is
                     // Lambda-cotorsion
  MuYZero,           // mu(Y_index) = 0 for the run's curve/field (index 1 or 2)
  ClassicalMuZero,   // mu(K^ac/K) = 0 for the run's field
};
const char* to_string(FactKind k);

struct ExternalFact {
  FactKind kind = FactKind::FineMuZero;
  // Which curve the fact is about: "E" (single-curve commands), "E1"/"E2"
  // (two-curve commands), a user-supplied label, or a comma-separated
  // a-invariant list.  Empty means the subject curve of a single-curve run.
  std::string curve;
  std::optional<std::array<Int, 5>> ainvs;  // structured alternative to `curve`
  int index = 0;                            // MuYZero only: 1 or 2
  std::string provenance;                   // free-text citation
};

// Facts file schema: one object or an array of objects
//   {"kind": "FineMuZero", "curve": "E1", "provenance": "..."}
// with optional "ainvs": [a1,a2,a3,a4,a6] and, for MuYZero, "index": 1|2.
// Throws std::domain_error on malformed input.
std::vector<ExternalFact> parse_facts(const std::string& json_text);
std::vector<ExternalFact> parse_facts_file(const std::string& path);

// Whether a curve-bound fact refers to the given curve: by position tag
// ("E", "E1", "E2"), by user label, or by a-invariants (as given or of the
// minimal model).
bool fact_matches_curve(const ExternalFact& f, const std::string& tag,
                        const std::string& label, const Curve& e);

// ---------------------------------------------------------------------------
// Certificates.

struct Condition {
  std::string name;
  TriState status = TriState::Unknown;
  std::string evidence;
  // Gating conditions are premises of conclusions; non-gating ones are
  // informational display lines and never block or enable a conclusion.
  bool gating = true;
};

struct Conclusion {
  std::string statement;
  std::string theorem;             // which result derived it
  std::vector<std::string> trail;  // premise condition names and cited facts
};

// Context carried from evaluation into conclusion derivation: inputs that
// select which conclusions a fully-satisfied hypothesis list yields.
struct DerivationContext {
  bool splitShape = false;        // converse theorem: emit the second mu(Y) line
  bool factFineMu1 = false;       // congruence transfer: mu^fine(E1) = 0 known
  bool factFineMu2 = false;       //                      mu^fine(E2) = 0 known
  std::string factFineMu1Prov;
  std::string factFineMu2Prov;
};

struct HypothesisCertificate {
  std::string theorem;  // "thm1" | "thm2" | "cor33" | "thm3"
  std::vector<Condition> conditions;
  std::vector<Conclusion> conclusions;
  DerivationContext ctx;
};

// Pure, monotone conclusion derivation: conclusions depend only on the
// statuses of gating conditions (all premises must Hold) and on ctx.
// Flipping any condition from Unknown to Fails never adds a conclusion;
// flipping to Holds never removes one.
std::vector<Conclusion> derive_conclusions(const std::string& theorem,
                                           const std::vector<Condition>& conditions,
                                           const DerivationContext& ctx);

struct EngineOptions {
  // The classical vanishing input mu(K^ac/K) = 0 for phi in {1, chibar} is
  // applied when h_K = 1; this flag extends the gate to p not dividing h_K.
  bool extendedClassicalMu = false;
};

// The reducible-case vanishing criterion: (1) reducible residual
// representation, (2) every Sigma prime splits, (3) in the indecomposable
// case every Sigma(phi2) prime splits, (4) mu(Y_1) = mu(Y_2) = 0 via the
// split-prime two-character criterion, the classical class-number gate, or
// external facts.  Conclusion: Lambda-cotorsion with mu^fine = 0.
HypothesisCertificate evaluate_theorem1(const Curve& e, const QuadField& K, const Int& p,
                                        const std::vector<ExternalFact>& facts,
                                        const EngineOptions& opt = {},
                                        const std::string& label = "");

// The converse: reducible plus externally assumed cotorsion-with-mu-zero
// yields mu(Y_1) = 0, and mu(Y_2) = 0 as well when the representation
// splits.
HypothesisCertificate evaluate_theorem2(const Curve& e, const QuadField& K, const Int& p,
                                        const std::vector<ExternalFact>& facts,
                                        const EngineOptions& opt = {},
                                        const std::string& label = "");

// Classical-mu corollary: K-rational p-torsion, the external cotorsion and
// mu^fine facts, and the Heegner splitting condition give mu(K^ac/K) = 0.
HypothesisCertificate evaluate_corollary33(const Curve& e, const QuadField& K, const Int& p,
                                           const std::vector<ExternalFact>& facts,
                                           const EngineOptions& opt = {},
                                           const std::string& label = "");

// Congruence transfer: both curves Heegner over K and p-congruent makes the
// two cotorsion-with-mu^fine-zero statements equivalent; a FineMuZero fact
// for either curve transfers to the other.
HypothesisCertificate evaluate_theorem3(const Curve& e1, const Curve& e2, const QuadField& K,
                                        const Int& p, const std::vector<ExternalFact>& facts,
                                        const EngineOptions& opt = {},
                                        const std::string& label1 = "",
                                        const std::string& label2 = "");

}  // namespace finemu
