#include "finemu/iwasawa.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace finemu {

bool is_distinguished(const std::vector<Int>& f, const Int& p) {
  if (f.empty()) return false;
  if (f.back() != 1) return false;
  for (std::size_t i = 0; i + 1 < f.size(); ++i)
    if (f[i] % p != 0) return false;
  return true;
}

void validate_presentation(const LambdaPresentation& P, const Int& p) {
  if (P.r < 0) throw std::domain_error("presentation: free rank must be nonnegative");
  for (unsigned long mu : P.muParts)
    if (mu == 0) throw std::domain_error("presentation: every mu part must be positive");
  for (const auto& f : P.fParts)
    if (!is_distinguished(f, p))
      throw std::domain_error("presentation: every torsion polynomial must be distinguished");
}

Int mu_invariant(const LambdaPresentation& P) {
  Int total = 0;
  for (unsigned long mu : P.muParts) total += Int(mu);
  return total;
}

std::size_t mu_multiplicity(const LambdaPresentation& P) { return P.muParts.size(); }

Int lambda_invariant(const LambdaPresentation& P) {
  Int total = 0;
  for (const auto& f : P.fParts) total += Int((unsigned long)(f.size() - 1));
  return total;
}

long mod_p_corank(const LambdaPresentation& P) {
  return P.r + (long)P.muParts.size();
}

std::vector<unsigned long> mod_p_finite_part(const LambdaPresentation& P) {
  std::vector<unsigned long> degs;
  degs.reserve(P.fParts.size());
  for (const auto& f : P.fParts) degs.push_back((unsigned long)(f.size() - 1));
  return degs;
}

namespace {

// F_p-dimension of F_p[T]/(T^trunc, gbar) computed by Gaussian elimination on
// the matrix of shifts T^k * gbar (k < trunc): dimension = trunc - rank.
unsigned long quotient_dim_fp(const std::vector<std::uint64_t>& gbar, std::uint64_t p,
                              unsigned long trunc) {
  bool zero = true;
  for (auto c : gbar)
    if (c != 0) zero = false;
  if (zero) return trunc;

  std::vector<std::vector<std::uint64_t>> rows;
  for (unsigned long k = 0; k < trunc; ++k) {
    std::vector<std::uint64_t> row(trunc, 0);
    bool nonzero = false;
    for (std::size_t j = 0; j < gbar.size(); ++j) {
      if (k + j >= trunc) break;
      row[k + j] = gbar[j];
      if (gbar[j] != 0) nonzero = true;
    }
    if (nonzero) rows.push_back(std::move(row));
  }

  unsigned long rank = 0;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < trunc && lead < rows.size(); ++col) {
    std::size_t pivot = lead;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[lead], rows[pivot]);
    std::uint64_t inv = invmod_u64(rows[lead][col], p);
    for (std::size_t j = col; j < trunc; ++j)
      rows[lead][j] = mulmod_u64(rows[lead][j], inv, p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == lead || rows[i][col] == 0) continue;
      std::uint64_t factor = rows[i][col];
      for (std::size_t j = col; j < trunc; ++j) {
        std::uint64_t sub = mulmod_u64(factor, rows[lead][j], p);
        rows[i][j] = (rows[i][j] + p - sub) % p;
      }
    }
    ++lead;
    ++rank;
  }
  return trunc - rank;
}

// Reduce an integer generator into (Z/p^a)[T]/(T^trunc) and then mod p,
// returning the F_p[T] coefficient vector.
std::vector<std::uint64_t> materialize_mod_p(const std::vector<Int>& g, const Int& p,
                                             const Int& pa, unsigned long trunc) {
  std::vector<std::uint64_t> out;
  for (std::size_t j = 0; j < g.size() && j < trunc; ++j) {
    Int c = g[j] % pa;
    if (c < 0) c += pa;
    Int cbar = c % p;
    out.push_back(cbar.get_ui());
  }
  return out;
}

// Total F_p-dimension of M/pM materialized at truncation order `trunc`.
unsigned long total_dim_at(const LambdaPresentation& P, const Int& p, const Int& pa,
                           unsigned long trunc) {
  unsigned long dim = 0;
  std::vector<Int> zero_gen{Int(0)};
  for (long i = 0; i < P.r; ++i) dim += quotient_dim_fp(materialize_mod_p(zero_gen, p, pa, trunc),
                                                        p.get_ui(), trunc);
  for (unsigned long mu : P.muParts) {
    std::vector<Int> gen{pow_int(p, mu)};
    dim += quotient_dim_fp(materialize_mod_p(gen, p, pa, trunc), p.get_ui(), trunc);
  }
  for (const auto& f : P.fParts)
    dim += quotient_dim_fp(materialize_mod_p(f, p, pa, trunc), p.get_ui(), trunc);
  return dim;
}

}  // namespace

bool verify_corank_oracle(const LambdaPresentation& P, const Int& p, unsigned long a,
                          unsigned long N) {
  if (p < 2 || !is_prime(p)) throw std::domain_error("verify_corank_oracle: p must be prime");
  to_long_checked(p, "oracle prime");  // entries must fit machine words
  validate_presentation(P, p);

  unsigned long mu_max = 0;
  for (unsigned long mu : P.muParts) mu_max = std::max(mu_max, mu);
  if (a <= mu_max)
    throw capability_error("verify_corank_oracle: p-power precision too small for the mu parts");
  Int lambda = lambda_invariant(P);
  if (Int((unsigned long)N) <= lambda + 2)
    throw capability_error("verify_corank_oracle: T-adic precision too small for the torsion parts");
  if (a > 64 || N > 4096)
    throw capability_error("verify_corank_oracle: precision beyond desk scale");

  Int pa = pow_int(p, a);
  unsigned long dN = total_dim_at(P, p, pa, N);
  unsigned long dN1 = total_dim_at(P, p, pa, N - 1);
  long inferred = (long)dN - (long)dN1;
  return inferred == mod_p_corank(P);
}

namespace {

LambdaPresentation presentation_from_json(const nlohmann::json& j, const Int& p) {
  if (!j.is_object()) throw std::domain_error("presentation: expected a JSON object");
  LambdaPresentation P;
  if (j.contains("r")) {
    if (!j["r"].is_number_integer())
      throw std::domain_error("presentation: \"r\" must be an integer");
    long long r = j["r"].get<long long>();
    if (r < 0) throw std::domain_error("presentation: \"r\" must be nonnegative");
    P.r = (long)r;
  }
  if (j.contains("mu")) {
    if (!j["mu"].is_array()) throw std::domain_error("presentation: \"mu\" must be an array");
    for (const auto& m : j["mu"]) {
      if (!m.is_number_integer() || m.get<long long>() <= 0)
        throw std::domain_error("presentation: every \"mu\" entry must be a positive integer");
      P.muParts.push_back((unsigned long)m.get<long long>());
    }
  }
  if (j.contains("f")) {
    if (!j["f"].is_array()) throw std::domain_error("presentation: \"f\" must be an array");
    for (const auto& poly : j["f"]) {
      if (!poly.is_array() || poly.empty())
        throw std::domain_error("presentation: every \"f\" entry must be a nonempty coefficient array");
      std::vector<Int> coeffs;
      for (const auto& c : poly) {
        if (!c.is_number_integer())
          throw std::domain_error("presentation: polynomial coefficients must be integers");
        long long v = c.get<long long>();
        coeffs.push_back(Int((long)v));
      }
      P.fParts.push_back(std::move(coeffs));
    }
  }
  validate_presentation(P, p);
  return P;
}

}  // namespace

LambdaPresentation parse_presentation(const std::string& json_text, const Int& p) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::domain_error(std::string("presentation: invalid JSON: ") + e.what());
  }
  return presentation_from_json(j, p);
}

std::vector<LambdaPresentation> parse_presentation_file(const std::string& path, const Int& p) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("presentation: cannot open file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw std::domain_error(std::string("presentation: invalid JSON: ") + e.what());
  }
  std::vector<LambdaPresentation> out;
  if (j.is_array()) {
    for (const auto& elem : j) out.push_back(presentation_from_json(elem, p));
  } else {
    out.push_back(presentation_from_json(j, p));
  }
  return out;
}

}  // namespace finemu
