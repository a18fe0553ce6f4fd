#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mirrorcone/grading.hpp"
#include "mirrorcone/toricdata.hpp"

namespace mirrorcone {

struct WTerm {
  int sign = 1;
  std::optional<Rat> val;  // valuation of the coefficient; none for block terms
  IntVec exp;
  bool block = false;
  std::size_t block_index = 0;
};

struct Superpotential {
  std::size_t n = 0;
  std::vector<WTerm> terms;  // block terms first, then Xi0 terms in lex order
};

class BsideError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Valuations default to lambda (when given in the input) and may be
/// overridden per monomial. Unknown keys raise UnknownMonomial.
Superpotential build_superpotential(const ValidatedToricData& vt,
                                    const std::map<IntVec, Rat>& b_valuations = {});

// Polynomials in z with formal coefficient symbols (one per W term).
struct PolyKey {
  IntVec z;
  std::vector<std::size_t> syms;  // sorted
  auto operator<=>(const PolyKey&) const = default;
};
using Poly = std::map<PolyKey, Int>;

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, const Int& k);
Poly w_as_poly(const Superpotential& w);

/// Element of S[x_1..x_n] with odd generators x_i: basis mask -> coefficient.
using ExtVec = std::map<std::uint32_t, Poly>;

/// Sum of terms coeff * (x_i wedge -) or coeff * (d/dx_i).
struct ExtOp {
  struct Term {
    Poly coeff;
    bool wedge;  // true: left multiplication by x_i; false: contraction d/dx_i
    std::size_t index;
  };
  std::size_t n = 0;
  std::vector<Term> terms;

  ExtVec apply(const ExtVec& v) const;
};

bool ext_equal(const ExtVec& a, const ExtVec& b);

struct KoszulMF {
  std::size_t n = 0;
  std::vector<Poly> W_split;  // W = sum z_i W_i
  ExtOp delta;                // sum z_i d/dphi_i + W_i phi_i
};

/// Each monomial goes to its smallest-index variable with positive exponent.
std::vector<Poly> split_superpotential(const Superpotential& w);
KoszulMF build_koszul_mf(const Superpotential& w);
/// delta^2 = W * id on every basis element.
bool check_factorization(const KoszulMF& k, const Superpotential& w);
/// Every nonzero entry of delta has G_tilde degree (1, 0).
bool check_delta_degree(const KoszulMF& k, const Superpotential& w, const GradingData& gd);

/// Sign of epsilon on variable z_i: (-1)^(1 + v_i).
int epsilon_var_sign(const IntVec& v, std::size_t i);
/// Sign epsilon puts on the coefficient of an Xi0 term: (-1)^<n_sigma + v - e_I, p>.
int epsilon_coeff_sign(const ValidatedToricData& vt, const IntVec& v, const IntVec& p);
/// Sign picked up by a whole term of W under epsilon.
int epsilon_term_sign(const ValidatedToricData& vt, const IntVec& v, const WTerm& t);
/// epsilon(term) = -term for every term.
bool check_wflips(const ValidatedToricData& vt, const Superpotential& w, const IntVec& v);

struct DualResult {
  ExtOp dual;             // sum -z_i theta_i + W_i d/dtheta_i
  ExtOp pulled_back;      // epsilon^* of the dual, computed from epsilon
  bool pulled_back_matches_closed_form = false;
  bool intertwines = false;          // Psi o pulled_back = delta_K o Psi
  bool unsigned_map_anticommutes = false;  // without (-1)^k: Psi o pulled_back = -delta_K o Psi
  GDeg map_degree;                   // G_tilde degree of the comparison map
  Int iso_degree;                    // its Z-part once the m-part is reduced to zero
  std::vector<int> theta_signs;      // theta_k -> (-1)^(1+v_k) theta_k
};

DualResult dualize_mf(const KoszulMF& k, const Superpotential& w, const ValidatedToricData& vt,
                      const GradingData& gd, const IntVec& v);

}  // namespace mirrorcone
