#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mirrorcone/intlat.hpp"
#include "mirrorcone/toricdata.hpp"

namespace mirrorcone {

class KoszulError : public std::runtime_error {
 public:
  enum class Kind { CutoffTooSmall, ClassificationViolation };
  KoszulError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

/// Blocks of consecutive indices with the given sizes.
using BlockSizes = std::vector<std::size_t>;

/// A class in Z (+) Z^I / <(2(1 - |I_b|), e_{I_b})>, normalized so that the
/// m-part has minimum 0 on every block.
struct DegClass {
  long j = 0;
  std::vector<long> m;
  auto operator<=>(const DegClass&) const = default;
};

DegClass canonical_class(const BlockSizes& sizes, long j, std::vector<long> m);

using GradedDims = std::map<DegClass, std::size_t>;

/// z^z times the odd monomial on the set bits of `odd`.
struct ExtMono {
  std::vector<long> z;
  std::uint32_t odd = 0;
  auto operator<=>(const ExtMono&) const = default;
};

struct ExtPolyElement {
  enum class Universe { Theta, U };  // theta_i of degree (-1, e_i), or u_i of degree (1, 0)
  Universe universe = Universe::Theta;
  BlockSizes sizes;
  std::map<ExtMono, Rat> terms;

  bool zero() const { return terms.empty(); }
};

DegClass degree_of(const ExtPolyElement::Universe u, const BlockSizes& sizes, const ExtMono& mono);

/// Contraction with dW_0, W_0 = -sum_b z^{e_{I_b}}.
ExtPolyElement iota_dw0(const ExtPolyElement& x);
/// Contraction with e_{I_b} on C[z][U].
ExtPolyElement iota_block(const ExtPolyElement& x, std::size_t block);
/// f(z_i) = z_i, f(u_i) = z_i theta_i.
ExtPolyElement f_map(const ExtPolyElement& x);

/// Classes reported for a cutoff c: those of z^a u^S with |a| <= c. Each
/// class is finite dimensional and its dimension is computed in full.
std::vector<DegClass> reported_classes(const BlockSizes& sizes, std::size_t z_cutoff);

GradedDims koszul_cohomology_dims(const BlockSizes& sizes, std::size_t z_cutoff);
GradedDims j_algebra_dims(const BlockSizes& sizes, std::size_t z_cutoff);
/// Convolution of the per-block dimensions.
GradedDims tensor_j_dims(const ValidatedToricData& vt, std::size_t z_cutoff);

/// iota_dW0 applied twice vanishes on every basis monomial of the reported classes.
bool check_iota_squares_zero(const BlockSizes& sizes, std::size_t z_cutoff);
/// Every cycle of iota_dW0 in the reported classes has theta^K-coefficients
/// divisible by z^{e_K}. Checked one block at a time: across blocks there are
/// cycles such as z_3 theta_0 - z_1 theta_2 outside im f.
bool check_kernel_in_image_of_f(const BlockSizes& sizes, std::size_t z_cutoff);

/// Homogeneous element of C[z][H] (U universe) is zero in the algebra J.
bool vanishes_in_j(const ExtPolyElement& x);
/// Basis of H^*: u_i - u_last for the non-last indices of each block, in order.
std::vector<ExtPolyElement> h_basis(const BlockSizes& sizes);

/// (-1)^(1 + <v + e_I, a> + |h|).
int sign_action(const IntVec& a, std::size_t h_size, const IntVec& v);

struct DeformationCandidate {
  enum class Fate { KilledBySign, KilledInJ, Surviving };
  IntVec a_deg;   // k(a) in M_bar
  Int a_size;     // |a|
  IntVec b;
  std::size_t h_size = 0;
  std::vector<std::size_t> h_pair;  // indices into h_basis when h_size = 2
  IntVec ell;
  int sign = 1;  // action of the non-trivial element
  bool nonzero_in_j = false;
  Fate fate = Fate::Surviving;
};

struct DeformationReport {
  std::vector<DeformationCandidate> candidates;  // b in lex order, then the |h| = 2 ones
  std::vector<IntVec> surviving;                 // classes r_b z^b, up to sign
  std::size_t killed_by_sign = 0;
  std::size_t killed_in_j = 0;
  bool first_order_nonzero = false;
};

DeformationReport enumerate_deformation_classes(const ValidatedToricData& vt, const IntVec& v);

/// K with e_K in M_bar and sum_{i in K} (1 - 2/d_i) = 1, in canonical subset order.
std::vector<Subset> enumerate_curvature_candidates(const ValidatedToricData& vt);

}  // namespace mirrorcone
