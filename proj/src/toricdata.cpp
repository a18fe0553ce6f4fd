#include "mirrorcone/toricdata.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "mirrorcone/parallel.hpp"

namespace mirrorcone {

std::string kind_name(ValidationError::Kind k) {
  switch (k) {
    case ValidationError::Kind::MalformedInput: return "MalformedInput";
    case ValidationError::Kind::BadPartition: return "BadPartition";
    case ValidationError::Kind::BlockTooSmall: return "BlockTooSmall";
    case ValidationError::Kind::DegreeSumNotOne: return "DegreeSumNotOne";
    case ValidationError::Kind::MissingGenerator: return "MissingGenerator";
    case ValidationError::Kind::DivisibilityFail: return "DivisibilityFail";
    case ValidationError::Kind::BadVolumeVector: return "BadVolumeVector";
    case ValidationError::Kind::UnknownMonomial: return "UnknownMonomial";
    case ValidationError::Kind::IndexSetTooLarge: return "IndexSetTooLarge";
  }
  return "Unknown";
}

IntVec ValidatedToricData::block_indicator(std::size_t j) const {
  IntVec e(n, 0);
  for (auto i : blocks[j]) e[i] = 1;
  return e;
}

IntVec ValidatedToricData::subset_indicator(const Subset& k) const {
  IntVec e(n, 0);
  for (auto i : k) e[i] = 1;
  return e;
}

namespace {

using VK = ValidationError::Kind;

std::string vec_str(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

void dfs_xi(const ValidatedToricData& vt, std::size_t i, Int remaining, IntVec& m,
            std::vector<IntVec>& out) {
  if (i == vt.n) {
    if (remaining == 0 && contains(vt.M_bar, m)) out.push_back(m);
    return;
  }
  Int top = remaining / vt.q[i];
  for (Int k = 0; k <= top; ++k) {
    m[i] = k;
    dfs_xi(vt, i + 1, remaining - k * vt.q[i], m, out);
  }
  m[i] = 0;
}

}  // namespace

ValidatedToricData validate(const ToricInput& input) {
  ValidatedToricData vt;
  vt.input = input;
  vt.n = input.d.size();
  vt.r = input.blocks.size();
  if (vt.n == 0) throw ValidationError(VK::MalformedInput, "empty index set");
  if (vt.r == 0) throw ValidationError(VK::MalformedInput, "no blocks");
  for (const auto& di : input.d)
    if (di <= 0) throw ValidationError(VK::MalformedInput, "degrees d_i must be positive");

  vt.block_of.assign(vt.n, vt.r);
  for (std::size_t j = 0; j < vt.r; ++j) {
    Block b = input.blocks[j];
    std::sort(b.begin(), b.end());
    for (auto i : b) {
      if (i >= vt.n) throw ValidationError(VK::BadPartition, "index out of range in block " + std::to_string(j + 1), {}, j);
      if (vt.block_of[i] != vt.r)
        throw ValidationError(VK::BadPartition, "index " + std::to_string(i + 1) + " appears twice", {}, j);
      vt.block_of[i] = j;
    }
    vt.blocks.push_back(std::move(b));
  }
  for (std::size_t i = 0; i < vt.n; ++i)
    if (vt.block_of[i] == vt.r)
      throw ValidationError(VK::BadPartition, "index " + std::to_string(i + 1) + " is in no block");

  for (std::size_t j = 0; j < vt.r; ++j) {
    if (vt.blocks[j].size() < 3)
      throw ValidationError(VK::BlockTooSmall, "block " + std::to_string(j + 1) + " has fewer than 3 elements", {}, j);
    Rat s = 0;
    for (auto i : vt.blocks[j]) s += Rat(1) / Rat(input.d[i]);
    if (s != 1)
      throw ValidationError(VK::DegreeSumNotOne,
                            "sum of 1/d_i over block " + std::to_string(j + 1) + " is " + to_string(s), {}, j);
  }

  vt.d = lcm_of(input.d);
  for (const auto& di : input.d) vt.q.push_back(vt.d / di);
  for (const auto& qi : vt.q) vt.n_sigma.push_back(Rat(qi) / Rat(vt.d));

  if (!input.generators.empty()) {
    vt.M_bar = hnf_canonicalize(input.generators, vt.n);
  } else if (!input.congruences.empty()) {
    vt.M_bar = sublattice_from_congruences(vt.n, input.congruences);
  } else {
    throw ValidationError(VK::MalformedInput, "lattice needs generators or congruences");
  }

  for (std::size_t i = 0; i < vt.n; ++i) {
    IntVec e(vt.n, 0);
    e[i] = input.d[i];
    if (!contains(vt.M_bar, e)) throw ValidationError(VK::MissingGenerator, "lattice lacks d_i e_i = " + vec_str(e), e);
  }
  for (std::size_t j = 0; j < vt.r; ++j) {
    IntVec e = vt.block_indicator(j);
    if (!contains(vt.M_bar, e))
      throw ValidationError(VK::MissingGenerator, "lattice lacks e_I_j = " + vec_str(e), e, j);
  }
  for (const auto& m : vt.M_bar.basis.row_list()) {
    if (!mpz_divisible_p(Int(dot(vt.q, m)).get_mpz_t(), vt.d.get_mpz_t()))
      throw ValidationError(VK::DivisibilityFail, "d does not divide <q,m> for m = " + vec_str(m), m);
  }

  if (input.v) {
    const IntVec& v = *input.v;
    if (v.size() != vt.n) throw ValidationError(VK::BadVolumeVector, "v has wrong length");
    for (std::size_t j = 0; j < vt.r; ++j) {
      Int s = 0;
      for (auto i : vt.blocks[j]) s += v[i];
      if (s != Int(vt.blocks[j].size() - 1))
        throw ValidationError(VK::BadVolumeVector,
                              "v sums to " + s.get_str() + " on block " + std::to_string(j + 1) + ", expected " +
                                  std::to_string(vt.blocks[j].size() - 1),
                              v, j);
    }
  }

  vt.N_bar = dual_lattice(vt.M_bar);
  auto xs = enumerate_xi(vt);
  vt.Xi = std::move(xs.xi);
  vt.Xi0 = std::move(xs.xi0);
  return vt;
}

bool has_two_zeros_per_block(const ValidatedToricData& vt, const IntVec& p) {
  for (const auto& b : vt.blocks) {
    std::size_t zeros = 0;
    for (auto i : b) zeros += (p[i] == 0);
    if (zeros < 2) return false;
  }
  return true;
}

XiSets enumerate_xi(const ValidatedToricData& vt) {
  XiSets s;
  IntVec m(vt.n, 0);
  dfs_xi(vt, 0, vt.d, m, s.xi);
  for (const auto& p : s.xi)
    if (has_two_zeros_per_block(vt, p)) s.xi0.push_back(p);
  return s;
}

bool subset_less(const ValidatedToricData& vt, const Subset& a, const Subset& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  std::vector<std::size_t> pa(vt.r, 0), pb(vt.r, 0);
  for (auto i : a) ++pa[vt.block_of[i]];
  for (auto i : b) ++pb[vt.block_of[i]];
  if (pa != pb) return pa < pb;
  return a < b;
}

namespace {

constexpr std::size_t kMaxHypercube = 30;

// Masks K with e_K in M_bar satisfying `pred`, unordered.
template <class Pred>
std::vector<std::uint64_t> scan_hypercube(const ValidatedToricData& vt, Pred pred) {
  const std::size_t n = vt.n;
  if (n > kMaxHypercube)
    throw ValidationError(VK::IndexSetTooLarge, "subset enumeration needs |I| <= 30");

  // e_K in M_bar iff every dual basis vector pairs integrally with e_K.
  // Scale non-integral dual rows to a common denominator D and work mod D.
  Int D = 1;
  for (const auto& row : vt.N_bar.basis)
    for (const auto& x : row) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), x.get_den_mpz_t());
  const std::int64_t Dm = D.get_si();
  std::vector<std::vector<std::int64_t>> cols;  // cols[k][i]
  for (const auto& row : vt.N_bar.basis) {
    bool integral = std::all_of(row.begin(), row.end(), [](const Rat& x) { return x.get_den() == 1; });
    if (integral) continue;
    std::vector<std::int64_t> c(n);
    for (std::size_t i = 0; i < n; ++i) {
      Int s = Int(row[i] * D);
      Int rm;
      mpz_fdiv_r(rm.get_mpz_t(), s.get_mpz_t(), D.get_mpz_t());
      c[i] = rm.get_si();
    }
    cols.push_back(std::move(c));
  }
  const std::size_t k = cols.size();
  const std::size_t lo_bits = n / 2, hi_bits = n - lo_bits;
  auto table = [&](std::size_t offset, std::size_t bits) {
    std::vector<std::int64_t> t((std::size_t{1} << bits) * k, 0);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << bits); ++mask) {
      std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
      std::uint64_t prev = mask & (mask - 1);
      for (std::size_t c = 0; c < k; ++c)
        t[mask * k + c] = (t[prev * k + c] + cols[c][offset + low]) % Dm;
    }
    return t;
  };
  const auto lo = table(0, lo_bits);
  const auto hi = table(lo_bits, hi_bits);
  const std::size_t nhi = std::size_t{1} << hi_bits;
  std::vector<std::vector<std::uint64_t>> found(nhi);
  parallel_for(nhi, [&](std::size_t h) {
    for (std::uint64_t l = 0; l < (std::uint64_t{1} << lo_bits); ++l) {
      std::uint64_t mask = (std::uint64_t{h} << lo_bits) | l;
      if (mask == 0) continue;
      bool in = true;
      for (std::size_t c = 0; c < k && in; ++c) in = (lo[l * k + c] + hi[h * k + c]) % Dm == 0;
      if (in && pred(mask)) found[h].push_back(mask);
    }
  });
  std::vector<std::uint64_t> all;
  for (auto& f : found) all.insert(all.end(), f.begin(), f.end());
  return all;
}

std::vector<Subset> to_sorted_subsets(const ValidatedToricData& vt, const std::vector<std::uint64_t>& masks) {
  std::vector<Subset> out;
  out.reserve(masks.size());
  for (auto mask : masks) {
    Subset s;
    for (std::size_t i = 0; i < vt.n; ++i)
      if (mask >> i & 1) s.push_back(i);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [&](const Subset& a, const Subset& b) { return subset_less(vt, a, b); });
  return out;
}

std::vector<std::uint64_t> block_masks(const ValidatedToricData& vt) {
  std::vector<std::uint64_t> bm(vt.r, 0);
  for (std::size_t j = 0; j < vt.r; ++j)
    for (auto i : vt.blocks[j]) bm[j] |= std::uint64_t{1} << i;
  return bm;
}

Rat block_pairing(const ValidatedToricData& vt, std::size_t j, const IntVec& m) {
  Rat s = 0;
  for (auto i : vt.blocks[j]) s += Rat(m[i]) / Rat(vt.input.d[i]);
  return s;
}

}  // namespace

std::vector<Subset> hypercube_points(const ValidatedToricData& vt) {
  return to_sorted_subsets(vt, scan_hypercube(vt, [](std::uint64_t) { return true; }));
}

NefVerdict check_nef_partition(const ValidatedToricData& vt) {
  NefVerdict out;
  std::optional<NefVerdict> basis_witness;
  for (std::size_t j = 0; j < vt.r && !basis_witness; ++j)
    for (const auto& m : vt.M_bar.basis.row_list()) {
      Rat p = block_pairing(vt, j, m);
      if (p.get_den() != 1) {
        basis_witness = NefVerdict{false, j, m, p};
        break;
      }
    }
  if (!basis_witness) return out;

  // Prefer a 0/1 witness when one exists; fall back to the basis vector.
  if (vt.n <= kMaxHypercube) {
    for (const auto& k : hypercube_points(vt)) {
      IntVec m = vt.subset_indicator(k);
      for (std::size_t j = 0; j < vt.r; ++j) {
        Rat p = block_pairing(vt, j, m);
        if (p.get_den() != 1) return NefVerdict{false, j, m, p};
      }
    }
  }
  return *basis_witness;
}

SubsetVerdict check_embeddedness(const ValidatedToricData& vt) {
  auto bm = block_masks(vt);
  auto masks = scan_hypercube(vt, [&](std::uint64_t mask) {
    for (auto b : bm) {
      auto part = mask & b;
      if (part != 0 && part != b) return true;
    }
    return false;
  });
  SubsetVerdict v;
  v.witnesses = to_sorted_subsets(vt, masks);
  v.holds = v.witnesses.empty();
  return v;
}

SubsetVerdict check_no_bc(const ValidatedToricData& vt) {
  // |K| - 1 = 2 sum 1/d_i  <=>  d(|K| - 1) = 2 sum q_i.
  std::vector<std::int64_t> q;
  for (const auto& x : vt.q) q.push_back(x.get_si());
  const std::int64_t d = vt.d.get_si();
  auto masks = scan_hypercube(vt, [&](std::uint64_t mask) {
    std::int64_t size = __builtin_popcountll(mask), s = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (mask >> i & 1) s += q[i];
    return d * (size - 1) == 2 * s;
  });
  SubsetVerdict v;
  v.witnesses = to_sorted_subsets(vt, masks);
  v.holds = v.witnesses.empty();
  return v;
}

SymmetryGroups symmetry_groups(const ValidatedToricData& vt) {
  SymmetryGroups g;
  g.G = quotient_group(vt.n, vt.M_bar);
  g.G_star = g.G;

  // Gamma = N_bar / (Z^I + Z n_sigma). In the dual basis a vector x has
  // coordinates (<x, m_k>)_k, so the relations are the columns of the
  // M_bar basis and the row (<n_sigma, m_k>)_k.
  const auto rows = vt.M_bar.basis.row_list();
  IntMatrix rel(vt.n + 1, vt.n);
  for (std::size_t i = 0; i < vt.n; ++i)
    for (std::size_t k = 0; k < vt.n; ++k) rel(i, k) = rows[k][i];
  for (std::size_t k = 0; k < vt.n; ++k) {
    Rat p = dot(vt.n_sigma, rows[k]);
    if (p.get_den() != 1) throw LatticeError("n_sigma is not in the dual lattice");
    rel(vt.n, k) = p.get_num();
  }
  g.Gamma = cokernel(rel);

  // Order check: n_sigma has order d modulo Z^I.
  if (g.Gamma.order() * vt.d != g.G.order()) throw LatticeError("Gamma order cross-check failed");
  return g;
}

std::string exponent_key(const IntVec& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + p[i].get_str();
  return s;
}

IntVec parse_exponent_key(const std::string& s) {
  IntVec out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    Int x;
    if (tok.empty() || x.set_str(tok, 10) != 0)
      throw ValidationError(VK::MalformedInput, "bad exponent key '" + s + "'");
    out.push_back(x);
  }
  return out;
}

std::map<IntVec, Rat> resolve_lambda(const ValidatedToricData& vt, const LambdaSpec& spec) {
  std::map<IntVec, Rat> out;
  switch (spec.kind) {
    case LambdaSpec::Kind::None:
      throw ValidationError(VK::MalformedInput, "no lambda given");
    case LambdaSpec::Kind::Uniform:
      if (spec.uniform <= 0) throw ValidationError(VK::MalformedInput, "lambda must be positive");
      for (const auto& p : vt.Xi0) out[p] = spec.uniform;
      return out;
    case LambdaSpec::Kind::Map:
      for (const auto& [p, val] : spec.values) {
        if (!std::binary_search(vt.Xi0.begin(), vt.Xi0.end(), p))
          throw ValidationError(VK::UnknownMonomial, "lambda key " + exponent_key(p) + " is not in Xi0", p);
        if (val <= 0) throw ValidationError(VK::MalformedInput, "lambda must be positive");
        out[p] = val;
      }
      for (const auto& p : vt.Xi0)
        if (!out.count(p)) throw ValidationError(VK::MalformedInput, "lambda missing for " + exponent_key(p), p);
      return out;
  }
  return out;
}

}  // namespace mirrorcone
