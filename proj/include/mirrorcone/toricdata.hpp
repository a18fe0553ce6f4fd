#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mirrorcone/intlat.hpp"

namespace mirrorcone {

using Block = std::vector<std::size_t>;  // 0-based indices, sorted
using Subset = std::vector<std::size_t>; // 0-based indices, sorted

struct LambdaSpec {
  enum class Kind { None, Uniform, Map };
  Kind kind = Kind::None;
  Rat uniform;
  std::map<IntVec, Rat> values;  // keyed by exponent vector
};

struct ToricInput {
  std::vector<Block> blocks;
  IntVec d;
  std::vector<IntVec> generators;       // used when nonempty
  std::vector<Congruence> congruences;  // used otherwise
  LambdaSpec lambda;
  std::optional<IntVec> v;
  std::map<IntVec, Rat> b_valuations;
};

class ValidationError : public std::runtime_error {
 public:
  enum class Kind {
    MalformedInput,
    BadPartition,
    BlockTooSmall,
    DegreeSumNotOne,
    MissingGenerator,
    DivisibilityFail,
    BadVolumeVector,
    UnknownMonomial,
    IndexSetTooLarge,
  };
  ValidationError(Kind k, std::string msg, IntVec witness = {}, std::size_t block = 0)
      : std::runtime_error(std::move(msg)), kind(k), witness(std::move(witness)), block(block) {}

  Kind kind;
  IntVec witness;
  std::size_t block;
};

std::string kind_name(ValidationError::Kind k);

struct ValidatedToricData {
  ToricInput input;
  std::size_t n = 0;  // |I|
  std::size_t r = 0;  // number of blocks
  std::vector<Block> blocks;
  std::vector<std::size_t> block_of;  // index -> block
  Sublattice M_bar;
  RationalLatticeBasis N_bar;
  Int d;
  IntVec q;
  RatVec n_sigma;
  std::vector<IntVec> Xi;
  std::vector<IntVec> Xi0;

  IntVec block_indicator(std::size_t j) const;
  IntVec subset_indicator(const Subset& k) const;
};

ValidatedToricData validate(const ToricInput& input);

struct XiSets {
  std::vector<IntVec> xi;
  std::vector<IntVec> xi0;
};
XiSets enumerate_xi(const ValidatedToricData& vt);
bool has_two_zeros_per_block(const ValidatedToricData& vt, const IntVec& p);

struct NefVerdict {
  bool holds = true;
  std::size_t block = 0;  // witness j (0-based)
  IntVec m;               // witness in M_bar
  Rat pairing;            // <iota(e_{I_j}), m>, non-integral on failure
};
NefVerdict check_nef_partition(const ValidatedToricData& vt);

struct SubsetVerdict {
  bool holds = true;
  std::vector<Subset> witnesses;  // canonical subset order
};
SubsetVerdict check_embeddedness(const ValidatedToricData& vt);
SubsetVerdict check_no_bc(const ValidatedToricData& vt);

/// Every K (nonempty) with e_K in M_bar, in canonical subset order.
std::vector<Subset> hypercube_points(const ValidatedToricData& vt);
/// Canonical subset order: size, then per-block intersection sizes, then lexicographic.
bool subset_less(const ValidatedToricData& vt, const Subset& a, const Subset& b);

struct SymmetryGroups {
  FiniteAbelianGroup G;
  FiniteAbelianGroup G_star;
  FiniteAbelianGroup Gamma;
};
SymmetryGroups symmetry_groups(const ValidatedToricData& vt);

/// lambda_p for every p in Xi0; throws UnknownMonomial / missing keys.
std::map<IntVec, Rat> resolve_lambda(const ValidatedToricData& vt, const LambdaSpec& spec);

std::string exponent_key(const IntVec& p);  // "a,b,c"
IntVec parse_exponent_key(const std::string& s);

}  // namespace mirrorcone
