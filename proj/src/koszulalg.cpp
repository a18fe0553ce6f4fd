#include "mirrorcone/koszulalg.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>

#include "mirrorcone/parallel.hpp"

namespace mirrorcone {

namespace {

struct Layout {
  std::vector<Block> blocks;
  std::size_t n = 0;
  std::vector<std::size_t> block_of;

  explicit Layout(std::vector<Block> bs) : blocks(std::move(bs)) {
    for (const auto& b : blocks) n += b.size();
    block_of.assign(n, 0);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (auto i : blocks[b]) block_of[i] = b;
  }
  static Layout consecutive(const BlockSizes& sizes) {
    std::vector<Block> bs;
    std::size_t at = 0;
    for (auto s : sizes) {
      Block b;
      for (std::size_t k = 0; k < s; ++k) b.push_back(at++);
      bs.push_back(std::move(b));
    }
    return Layout(std::move(bs));
  }
  std::uint32_t block_mask(std::size_t b) const {
    std::uint32_t m = 0;
    for (auto i : blocks[b]) m |= std::uint32_t{1} << i;
    return m;
  }
};

DegClass canon(const Layout& L, long j, std::vector<long> m) {
  for (const auto& b : L.blocks) {
    long lo = m[b[0]];
    for (auto i : b) lo = std::min(lo, m[i]);
    for (auto i : b) m[i] -= lo;
    j -= 2 * (1 - static_cast<long>(b.size())) * lo;
  }
  return {j, std::move(m)};
}

DegClass degree(const Layout& L, ExtPolyElement::Universe u, const ExtMono& mono) {
  long za = 0;
  std::vector<long> m(L.n);
  for (std::size_t i = 0; i < L.n; ++i) {
    za += mono.z[i];
    long odd = mono.odd >> i & 1;
    m[i] = u == ExtPolyElement::Universe::Theta ? odd - mono.z[i] : -mono.z[i];
  }
  long k = std::popcount(mono.odd);
  return canon(L, u == ExtPolyElement::Universe::Theta ? 2 * za - k : 2 * za + k, std::move(m));
}

DegClass shift(const Layout& L, const DegClass& x, const DegClass& y, int sign) {
  std::vector<long> m(L.n);
  for (std::size_t i = 0; i < L.n; ++i) m[i] = x.m[i] + sign * y.m[i];
  return canon(L, x.j + sign * y.j, std::move(m));
}

using Terms = std::map<ExtMono, Rat>;

void add_term(Terms& t, const ExtMono& mono, const Rat& c) {
  if (c == 0) return;
  auto& x = t[mono];
  x += c;
  if (x == 0) t.erase(mono);
}

int below_parity(std::uint32_t S, std::size_t k) { return std::popcount(S & ((std::uint32_t{1} << k) - 1)) % 2; }

// Sign of u^S wedge u^T, or 0 if they overlap.
int wedge_sign(std::uint32_t S, std::uint32_t T) {
  if (S & T) return 0;
  int inv = 0;
  for (std::uint32_t t = T; t; t &= t - 1) {
    int k = std::countr_zero(t);
    inv += std::popcount(S >> (k + 1));
  }
  return inv % 2 ? -1 : 1;
}

Terms mul(const Terms& x, const Terms& y) {
  Terms out;
  for (const auto& [a, ca] : x)
    for (const auto& [b, cb] : y) {
      int s = wedge_sign(a.odd, b.odd);
      if (!s) continue;
      ExtMono m{a.z, a.odd | b.odd};
      for (std::size_t i = 0; i < m.z.size(); ++i) m.z[i] += b.z[i];
      add_term(out, m, ca * cb * s);
    }
  return out;
}

Terms iota_dw0_terms(const Layout& L, const Terms& x) {
  Terms out;
  for (const auto& [mono, c] : x)
    for (std::uint32_t K = mono.odd; K; K &= K - 1) {
      std::size_t k = static_cast<std::size_t>(std::countr_zero(K));
      ExtMono m{mono.z, mono.odd ^ (std::uint32_t{1} << k)};
      for (auto i : L.blocks[L.block_of[k]])
        if (i != k) m.z[i] += 1;
      // d_k W_0 = -z^{e_{I_b} - e_k}
      add_term(out, m, below_parity(mono.odd, k) ? c : Rat(-c));
    }
  return out;
}

Terms iota_block_terms(const Layout& L, const Terms& x, std::size_t b) {
  Terms out;
  const std::uint32_t bm = L.block_mask(b);
  for (const auto& [mono, c] : x)
    for (std::uint32_t K = mono.odd & bm; K; K &= K - 1) {
      std::size_t k = static_cast<std::size_t>(std::countr_zero(K));
      add_term(out, ExtMono{mono.z, mono.odd ^ (std::uint32_t{1} << k)}, below_parity(mono.odd, k) ? Rat(-c) : c);
    }
  return out;
}

// Calls f(t) for integer vectors with t_b <= upper_b and sum t_b = total.
void for_each_split(const std::vector<long>& upper, long total, const std::function<void(const std::vector<long>&)>& f) {
  const std::size_t r = upper.size();
  std::vector<long> suffix(r + 1, 0);
  for (std::size_t b = r; b-- > 0;) suffix[b] = suffix[b + 1] + upper[b];
  std::vector<long> t(r);
  std::function<void(std::size_t, long)> rec = [&](std::size_t b, long rem) {
    if (b + 1 == r) {
      if (rem <= upper[b]) {
        t[b] = rem;
        f(t);
      }
      return;
    }
    for (long x = rem - suffix[b + 1]; x <= upper[b]; ++x) {
      t[b] = x;
      rec(b + 1, rem - x);
    }
  };
  if (r == 0) {
    if (total == 0) f(t);
    return;
  }
  rec(0, total);
}

std::vector<ExtMono> koszul_basis(const Layout& L, const DegClass& X) {
  std::vector<ExtMono> out;
  long msum = 0;
  for (auto x : X.m) msum += x;
  for (std::uint32_t K = 0; K < (std::uint32_t{1} << L.n); ++K) {
    long t2 = std::popcount(K) - 2 * msum - X.j;
    if (t2 % 2) continue;
    std::vector<long> upper;
    for (const auto& b : L.blocks) {
      long u = std::numeric_limits<long>::max();
      for (auto i : b) u = std::min(u, static_cast<long>(K >> i & 1) - X.m[i]);
      upper.push_back(u);
    }
    for_each_split(upper, t2 / 2, [&](const std::vector<long>& t) {
      ExtMono mono{std::vector<long>(L.n), K};
      for (std::size_t i = 0; i < L.n; ++i) mono.z[i] = static_cast<long>(K >> i & 1) - X.m[i] - t[L.block_of[i]];
      out.push_back(std::move(mono));
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Expansions of the wedge products of the H^* basis, indexed by subset mask.
struct HWedges {
  std::size_t dim = 0;
  std::vector<Terms> by_mask;  // odd-only terms (z = 0)
};

HWedges h_wedges(const Layout& L) {
  std::vector<Terms> basis;
  for (const auto& b : L.blocks)
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      Terms h;
      h[ExtMono{std::vector<long>(L.n), std::uint32_t{1} << b[k]}] = 1;
      h[ExtMono{std::vector<long>(L.n), std::uint32_t{1} << b.back()}] = -1;
      basis.push_back(std::move(h));
    }
  HWedges w;
  w.dim = basis.size();
  w.by_mask.resize(std::size_t{1} << w.dim);
  w.by_mask[0][ExtMono{std::vector<long>(L.n), 0}] = 1;
  for (std::uint32_t S = 1; S < (std::uint32_t{1} << w.dim); ++S) {
    int top = 31 - std::countl_zero(S);
    w.by_mask[S] = mul(w.by_mask[S ^ (std::uint32_t{1} << top)], basis[static_cast<std::size_t>(top)]);
  }
  return w;
}

Terms times_monomial(const Terms& x, const std::vector<long>& a) {
  Terms out;
  for (const auto& [m, c] : x) {
    ExtMono mm = m;
    for (std::size_t i = 0; i < a.size(); ++i) mm.z[i] += a[i];
    out[mm] = c;
  }
  return out;
}

std::vector<Terms> j_basis(const Layout& L, const HWedges& hw, const DegClass& X) {
  std::vector<Terms> out;
  long msum = 0;
  for (auto x : X.m) msum += x;
  std::vector<long> upper;
  for (const auto& b : L.blocks) {
    long mx = X.m[b[0]];
    for (auto i : b) mx = std::max(mx, X.m[i]);
    upper.push_back(-mx);
  }
  const long hdim = static_cast<long>(hw.dim);
  for (long k = 0; k <= hdim; ++k) {
    long t2 = k - X.j - 2 * msum;
    if (t2 % 2) continue;
    for_each_split(upper, t2 / 2, [&](const std::vector<long>& t) {
      std::vector<long> a(L.n);
      for (std::size_t i = 0; i < L.n; ++i) a[i] = -X.m[i] - t[L.block_of[i]];
      for (std::uint32_t S = 0; S < hw.by_mask.size(); ++S)
        if (std::popcount(S) == k) out.push_back(times_monomial(hw.by_mask[S], a));
    });
  }
  return out;
}

struct Generator {
  Terms g;
  DegClass deg;
};

std::vector<Generator> ideal_generators(const Layout& L) {
  std::vector<Generator> out;
  for (std::size_t b = 0; b < L.blocks.size(); ++b) {
    const auto& blk = L.blocks[b];
    for (std::uint32_t local = 0; local < (std::uint32_t{1} << blk.size()); ++local) {
      std::uint32_t K = 0;
      std::vector<long> zc(L.n, 0);
      for (std::size_t k = 0; k < blk.size(); ++k) {
        if (local >> k & 1)
          K |= std::uint32_t{1} << blk[k];
        else
          zc[blk[k]] = 1;
      }
      Terms g;
      if (K == 0) {
        g[ExtMono{zc, 0}] = 1;
      } else {
        Terms uK;
        uK[ExtMono{zc, K}] = 1;
        g = iota_block_terms(L, uK, b);
      }
      out.push_back({g, degree(L, ExtPolyElement::Universe::U, g.begin()->first)});
    }
  }
  return out;
}

using SparseRow = std::vector<std::pair<std::size_t, Rat>>;  // sorted by column

// row -= f * piv
void axpy(SparseRow& row, const Rat& f, const SparseRow& piv) {
  SparseRow out;
  out.reserve(row.size() + piv.size());
  auto a = row.begin();
  auto b = piv.begin();
  while (a != row.end() || b != piv.end()) {
    if (b == piv.end() || (a != row.end() && a->first < b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == row.end() || b->first < a->first) {
      out.emplace_back(b->first, -f * b->second);
      ++b;
    } else {
      Rat x = a->second - f * b->second;
      if (x != 0) out.emplace_back(a->first, std::move(x));
      ++a;
      ++b;
    }
  }
  row = std::move(out);
}

// Exact rank over Q by incremental sparse echelon form.
std::size_t rank_of(const std::vector<Terms>& rows) {
  std::map<ExtMono, std::size_t> index;
  for (const auto& r : rows)
    for (const auto& [m, c] : r) index.emplace(m, 0);
  std::size_t k = 0;
  for (auto& [m, i] : index) i = k++;
  std::vector<SparseRow> pivots(index.size());
  std::size_t rank = 0;
  for (const auto& r : rows) {
    SparseRow row;
    for (const auto& [m, c] : r) row.emplace_back(index[m], c);
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    while (!row.empty()) {
      auto& piv = pivots[row.front().first];
      if (piv.empty()) {
        piv = std::move(row);
        ++rank;
        break;
      }
      Rat f = row.front().second / piv.front().second;
      axpy(row, f, piv);
    }
  }
  return rank;
}

std::vector<Terms> ideal_rows(const Layout& L, const HWedges& hw, const std::vector<Generator>& gens, const DegClass& X) {
  std::vector<Terms> rows;
  for (const auto& g : gens) {
    DegClass Y = shift(L, X, g.deg, -1);
    for (const auto& e : j_basis(L, hw, Y)) rows.push_back(mul(e, g.g));
  }
  return rows;
}

std::vector<DegClass> classes_for(const Layout& L, std::size_t cutoff) {
  std::set<DegClass> out;
  std::vector<long> a(L.n, 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long left) {
    if (i == L.n) {
      long za = 0;
      std::vector<long> m(L.n);
      for (std::size_t k = 0; k < L.n; ++k) {
        za += a[k];
        m[k] = -a[k];
      }
      for (long k = 0; k <= static_cast<long>(L.n); ++k) out.insert(canon(L, 2 * za + k, m));
      return;
    }
    for (long x = 0; x <= left; ++x) {
      a[i] = x;
      rec(i + 1, left - x);
    }
    a[i] = 0;
  };
  rec(0, static_cast<long>(cutoff));
  return {out.begin(), out.end()};
}

void require_cutoff(const BlockSizes& sizes, std::size_t cutoff) {
  std::size_t n = 0;
  for (auto s : sizes) n += s;
  if (cutoff < n) throw KoszulError(KoszulError::Kind::CutoffTooSmall, "z cutoff must be at least |I|");
  if (n > 20) throw std::invalid_argument("too many variables");
}

GradedDims j_dims(const Layout& L, std::size_t cutoff) {
  auto classes = classes_for(L, cutoff);
  auto hw = h_wedges(L);
  auto gens = ideal_generators(L);
  std::vector<std::size_t> dims(classes.size());
  parallel_for(classes.size(), [&](std::size_t c) {
    auto basis = j_basis(L, hw, classes[c]);
    dims[c] = basis.size() - rank_of(ideal_rows(L, hw, gens, classes[c]));
  });
  GradedDims out;
  for (std::size_t c = 0; c < classes.size(); ++c) out[classes[c]] = dims[c];
  return out;
}

std::size_t iota_rank(const Layout& L, const DegClass& X) {
  std::vector<Terms> images;
  for (const auto& m : koszul_basis(L, X)) images.push_back(iota_dw0_terms(L, Terms{{m, Rat(1)}}));
  return rank_of(images);
}

Layout layout_of(const ExtPolyElement& x) { return Layout::consecutive(x.sizes); }

}  // namespace

DegClass canonical_class(const BlockSizes& sizes, long j, std::vector<long> m) {
  return canon(Layout::consecutive(sizes), j, std::move(m));
}

DegClass degree_of(const ExtPolyElement::Universe u, const BlockSizes& sizes, const ExtMono& mono) {
  return degree(Layout::consecutive(sizes), u, mono);
}

ExtPolyElement iota_dw0(const ExtPolyElement& x) {
  if (x.universe != ExtPolyElement::Universe::Theta) throw std::invalid_argument("iota_dw0 acts on C[z][theta]");
  ExtPolyElement out = x;
  out.terms = iota_dw0_terms(layout_of(x), x.terms);
  return out;
}

ExtPolyElement iota_block(const ExtPolyElement& x, std::size_t block) {
  if (x.universe != ExtPolyElement::Universe::U) throw std::invalid_argument("iota_block acts on C[z][U]");
  ExtPolyElement out = x;
  out.terms = iota_block_terms(layout_of(x), x.terms, block);
  return out;
}

ExtPolyElement f_map(const ExtPolyElement& x) {
  if (x.universe != ExtPolyElement::Universe::U) throw std::invalid_argument("f acts on C[z][U]");
  ExtPolyElement out{ExtPolyElement::Universe::Theta, x.sizes, {}};
  for (const auto& [m, c] : x.terms) {
    ExtMono mm = m;
    for (std::size_t i = 0; i < mm.z.size(); ++i) mm.z[i] += m.odd >> i & 1;
    add_term(out.terms, mm, c);
  }
  return out;
}

std::vector<DegClass> reported_classes(const BlockSizes& sizes, std::size_t z_cutoff) {
  return classes_for(Layout::consecutive(sizes), z_cutoff);
}

GradedDims koszul_cohomology_dims(const BlockSizes& sizes, std::size_t z_cutoff) {
  require_cutoff(sizes, z_cutoff);
  const Layout L = Layout::consecutive(sizes);
  auto classes = classes_for(L, z_cutoff);
  const DegClass one{1, std::vector<long>(L.n, 0)};
  // Ranks of iota out of every class and out of its predecessor.
  std::set<DegClass> needed(classes.begin(), classes.end());
  for (const auto& X : classes) needed.insert(shift(L, X, one, -1));
  const std::vector<DegClass> all(needed.begin(), needed.end());
  std::vector<std::size_t> ranks(all.size());
  parallel_for(all.size(), [&](std::size_t c) { ranks[c] = iota_rank(L, all[c]); });
  auto rank_at = [&](const DegClass& X) {
    return ranks[static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), X) - all.begin())];
  };
  GradedDims out;
  for (const auto& X : classes) out[X] = koszul_basis(L, X).size() - rank_at(X) - rank_at(shift(L, X, one, -1));
  return out;
}

GradedDims j_algebra_dims(const BlockSizes& sizes, std::size_t z_cutoff) {
  require_cutoff(sizes, z_cutoff);
  return j_dims(Layout::consecutive(sizes), z_cutoff);
}

GradedDims tensor_j_dims(const ValidatedToricData& vt, std::size_t z_cutoff) {
  BlockSizes sizes;
  for (const auto& b : vt.blocks) sizes.push_back(b.size());
  require_cutoff(sizes, z_cutoff);
  const Layout full(vt.blocks);
  std::vector<GradedDims> per;
  for (const auto& b : vt.blocks) per.push_back(j_dims(Layout::consecutive({b.size()}), z_cutoff));
  GradedDims out;
  for (const auto& X : classes_for(full, z_cutoff)) out[X] = 0;

  // Size of the zero-minimum representative of a canonical block class.
  auto rep_size = [](const DegClass& x) {
    long mx = 0, s = 0;
    for (auto v : x.m) {
      mx = std::max(mx, v);
      s += v;
    }
    return mx * static_cast<long>(x.m.size()) - s;
  };
  std::vector<std::vector<std::pair<DegClass, std::size_t>>> nonzero(per.size());
  for (std::size_t b = 0; b < per.size(); ++b)
    for (const auto& [x, d] : per[b])
      if (d > 0) nonzero[b].emplace_back(x, d);

  std::vector<long> m(vt.n, 0);
  std::function<void(std::size_t, long, long, Int)> rec = [&](std::size_t b, long j, long used, Int prod) {
    if (b == per.size()) {
      auto it = out.find(DegClass{j, m});
      if (it != out.end()) it->second += prod.get_ui();
      return;
    }
    for (const auto& [x, d] : nonzero[b]) {
      long sz = rep_size(x);
      if (used + sz > static_cast<long>(z_cutoff)) continue;
      for (std::size_t k = 0; k < vt.blocks[b].size(); ++k) m[vt.blocks[b][k]] = x.m[k];
      rec(b + 1, j + x.j, used + sz, prod * static_cast<unsigned long>(d));
    }
  };
  rec(0, 0, 0, Int(1));
  return out;
}

bool check_iota_squares_zero(const BlockSizes& sizes, std::size_t z_cutoff) {
  const Layout L = Layout::consecutive(sizes);
  for (const auto& X : classes_for(L, z_cutoff))
    for (const auto& m : koszul_basis(L, X))
      if (!iota_dw0_terms(L, iota_dw0_terms(L, Terms{{m, Rat(1)}})).empty()) return false;
  return true;
}

bool check_kernel_in_image_of_f(const BlockSizes& sizes, std::size_t z_cutoff) {
  if (sizes.size() != 1) {
    for (auto s : sizes)
      if (!check_kernel_in_image_of_f({s}, z_cutoff)) return false;
    return true;
  }
  const Layout L = Layout::consecutive(sizes);
  for (const auto& X : classes_for(L, z_cutoff)) {
    auto basis = koszul_basis(L, X);
    if (basis.empty()) continue;
    std::map<ExtMono, std::size_t> index;
    std::vector<Terms> images;
    for (const auto& m : basis) {
      images.push_back(iota_dw0_terms(L, Terms{{m, Rat(1)}}));
      for (const auto& [t, c] : images.back()) index.emplace(t, 0);
    }
    std::size_t k = 0;
    for (auto& [t, i] : index) i = k++;
    // Left kernel of the image matrix = nullspace of its transpose.
    std::vector<RatVec> transposed(index.size(), RatVec(basis.size(), Rat(0)));
    for (std::size_t b = 0; b < basis.size(); ++b)
      for (const auto& [t, c] : images[b]) transposed[index[t]][b] = c;
    for (const auto& x : rational_nullspace(transposed, basis.size()))
      for (std::size_t b = 0; b < basis.size(); ++b) {
        if (x[b] == 0) continue;
        for (std::size_t i = 0; i < L.n; ++i)
          if ((basis[b].odd >> i & 1) && basis[b].z[i] < 1) return false;
      }
  }
  return true;
}

std::vector<ExtPolyElement> h_basis(const BlockSizes& sizes) {
  const Layout L = Layout::consecutive(sizes);
  std::vector<ExtPolyElement> out;
  for (const auto& b : L.blocks)
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      ExtPolyElement h{ExtPolyElement::Universe::U, sizes, {}};
      h.terms[ExtMono{std::vector<long>(L.n), std::uint32_t{1} << b[k]}] = 1;
      h.terms[ExtMono{std::vector<long>(L.n), std::uint32_t{1} << b.back()}] = -1;
      out.push_back(std::move(h));
    }
  return out;
}

bool vanishes_in_j(const ExtPolyElement& x) {
  if (x.universe != ExtPolyElement::Universe::U) throw std::invalid_argument("J elements live in C[z][U]");
  if (x.terms.empty()) return true;
  const Layout L = layout_of(x);
  for (std::size_t b = 0; b < L.blocks.size(); ++b)
    if (!iota_block_terms(L, x.terms, b).empty()) throw std::invalid_argument("element is not in C[z][H]");
  auto X = degree(L, x.universe, x.terms.begin()->first);
  for (const auto& [m, c] : x.terms)
    if (degree(L, x.universe, m) != X) throw std::invalid_argument("element is not homogeneous");
  auto rows = ideal_rows(L, h_wedges(L), ideal_generators(L), X);
  std::size_t before = rank_of(rows);
  rows.push_back(x.terms);
  return rank_of(rows) == before;
}

int sign_action(const IntVec& a, std::size_t h_size, const IntVec& v) {
  Int dagger = 1 + static_cast<unsigned long>(h_size);
  for (std::size_t i = 0; i < a.size(); ++i) dagger += (v[i] + 1) * a[i];
  return mpz_odd_p(dagger.get_mpz_t()) ? -1 : 1;
}

namespace {

// Restriction of z^b (times an optional wedge of H basis vectors of one block) to block `blk`.
ExtPolyElement block_element(const Block& blk, const IntVec& b, const std::vector<std::size_t>& h_local) {
  ExtPolyElement e{ExtPolyElement::Universe::U, {blk.size()}, {}};
  std::vector<long> z(blk.size());
  for (std::size_t k = 0; k < blk.size(); ++k) z[k] = b[blk[k]].get_si();
  Terms t{{ExtMono{z, 0}, Rat(1)}};
  auto hb = h_basis({blk.size()});
  for (auto i : h_local) t = mul(t, hb[i].terms);
  e.terms = t;
  return e;
}

}  // namespace

DeformationReport enumerate_deformation_classes(const ValidatedToricData& vt, const IntVec& v) {
  DeformationReport rep;
  const std::size_t n = vt.n;
  IntVec e_I(n, 1);

  // h basis positions: (block, local index).
  std::vector<std::pair<std::size_t, std::size_t>> hpos;
  for (std::size_t b = 0; b < vt.r; ++b)
    for (std::size_t k = 0; k + 1 < vt.blocks[b].size(); ++k) hpos.emplace_back(b, k);

  auto dagger = [&](const IntVec& ka, const IntVec& b, std::size_t h) {
    Rat d = 1 + static_cast<long>(h);
    for (std::size_t i = 0; i < n; ++i) d += (vt.n_sigma[i] + v[i] - 1) * ka[i] + (v[i] + 1) * b[i];
    if (d.get_den() != 1) throw KoszulError(KoszulError::Kind::ClassificationViolation, "non-integral sign exponent");
    return d.get_num();
  };
  // The parity must not depend on the choice of ell.
  auto checked_sign = [&](const IntVec& b, std::size_t h, const IntVec& ell0) {
    auto ka_for = [&](const IntVec& ell) {
      IntVec ka = b;
      for (std::size_t j = 0; j < vt.r; ++j)
        for (auto i : vt.blocks[j]) ka[i] += ell[j];
      return ka;
    };
    bool odd = mpz_odd_p(dagger(ka_for(ell0), b, h).get_mpz_t());
    std::size_t combos = 1;
    for (std::size_t j = 0; j < std::min<std::size_t>(vt.r, 4); ++j) combos *= 3;
    for (std::size_t c = 0; c < combos; ++c) {
      IntVec ell = ell0;
      std::size_t x = c;
      for (std::size_t j = 0; j < std::min<std::size_t>(vt.r, 4); ++j, x /= 3) ell[j] += static_cast<long>(x % 3) - 1;
      if (mpz_odd_p(dagger(ka_for(ell), b, h).get_mpz_t()) != odd)
        throw KoszulError(KoszulError::Kind::ClassificationViolation, "sign depends on ell");
    }
    return odd ? -1 : 1;
  };

  std::vector<DeformationCandidate> cands(vt.Xi.size());
  parallel_for(vt.Xi.size(), [&](std::size_t t) {
    const IntVec& b = vt.Xi[t];
    DeformationCandidate c;
    c.b = b;
    c.a_deg = b;
    c.a_size = 1;
    c.ell = IntVec(vt.r, 0);
    c.sign = checked_sign(b, 0, c.ell);
    c.nonzero_in_j = true;
    for (const auto& blk : vt.blocks)
      if (vanishes_in_j(block_element(blk, b, {}))) c.nonzero_in_j = false;
    cands[t] = std::move(c);
  });
  for (std::size_t x = 0; x < hpos.size(); ++x)
    for (std::size_t y = x + 1; y < hpos.size(); ++y) {
      DeformationCandidate c;
      c.b = IntVec(n, 0);
      c.h_size = 2;
      c.h_pair = {x, y};
      c.ell = IntVec(vt.r, 0);
      c.ell[0] = 1;
      c.a_deg = vt.block_indicator(0);
      c.a_size = 1;
      c.sign = checked_sign(c.b, 2, c.ell);
      const IntVec zero(n, 0);
      if (hpos[x].first == hpos[y].first) {
        c.nonzero_in_j = !vanishes_in_j(block_element(vt.blocks[hpos[x].first], zero, {hpos[x].second, hpos[y].second}));
      } else {
        c.nonzero_in_j = !vanishes_in_j(block_element(vt.blocks[hpos[x].first], zero, {hpos[x].second})) &&
                         !vanishes_in_j(block_element(vt.blocks[hpos[y].first], zero, {hpos[y].second}));
      }
      cands.push_back(std::move(c));
    }

  for (auto& c : cands) {
    if (c.sign < 0) {
      c.fate = DeformationCandidate::Fate::KilledBySign;
      ++rep.killed_by_sign;
    } else if (!c.nonzero_in_j) {
      c.fate = DeformationCandidate::Fate::KilledInJ;
      ++rep.killed_in_j;
    } else {
      c.fate = DeformationCandidate::Fate::Surviving;
      if (c.h_size != 0)
        throw KoszulError(KoszulError::Kind::ClassificationViolation, "surviving class with |h| = 2");
      rep.surviving.push_back(c.b);
    }
  }
  rep.candidates = std::move(cands);
  if (rep.surviving != vt.Xi0) {
    for (const auto& b : rep.surviving)
      if (!std::binary_search(vt.Xi0.begin(), vt.Xi0.end(), b))
        throw KoszulError(KoszulError::Kind::ClassificationViolation,
                          "surviving class " + exponent_key(b) + " is not a first-order class");
    throw KoszulError(KoszulError::Kind::ClassificationViolation, "a first-order class does not survive");
  }
  rep.first_order_nonzero = true;
  for (const auto& c : rep.candidates)
    if (c.h_size == 0 && std::binary_search(vt.Xi0.begin(), vt.Xi0.end(), c.b) && !c.nonzero_in_j)
      rep.first_order_nonzero = false;
  return rep;
}

std::vector<Subset> enumerate_curvature_candidates(const ValidatedToricData& vt) {
  const std::size_t n = vt.n;
  if (n > 24) return check_no_bc(vt).witnesses;
  // sum (1 - 2/d_i) = 1, scaled by D = lcm(d_i).
  Int D = lcm_of(vt.input.d);
  std::vector<long> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = Int((vt.input.d[i] - 2) * D / vt.input.d[i]).get_si();
  const long target = D.get_si();
  std::vector<Subset> out;
  for (std::uint32_t K = 1; K < (std::uint32_t{1} << n); ++K) {
    long s = 0;
    for (std::uint32_t x = K; x; x &= x - 1) s += w[static_cast<std::size_t>(std::countr_zero(x))];
    if (s != target) continue;
    Subset sub;
    for (std::size_t i = 0; i < n; ++i)
      if (K >> i & 1) sub.push_back(i);
    if (contains(vt.M_bar, vt.subset_indicator(sub))) out.push_back(std::move(sub));
  }
  std::sort(out.begin(), out.end(), [&](const Subset& a, const Subset& b) { return subset_less(vt, a, b); });
  return out;
}

}  // namespace mirrorcone
