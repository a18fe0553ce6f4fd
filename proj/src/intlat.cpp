#include "mirrorcone/intlat.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace mirrorcone {

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rs, std::size_t cols) {
  IntMatrix m(rs.size(), cols);
  for (std::size_t r = 0; r < rs.size(); ++r) {
    if (rs[r].size() != cols) throw LatticeError("row length mismatch");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rs[r][c];
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntVec IntMatrix::row(std::size_t r) const {
  return IntVec(entries.begin() + static_cast<std::ptrdiff_t>(r * cols),
                entries.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));
}

std::vector<IntVec> IntMatrix::row_list() const {
  std::vector<IntVec> out;
  out.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) out.push_back(row(r));
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols, rows);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) t(c, r) = (*this)(r, c);
  return t;
}

std::size_t Sublattice::pivot(std::size_t i) const {
  for (std::size_t c = basis.cols; c-- > 0;)
    if (basis(i, c) != 0) return c;
  throw LatticeError("zero row in HNF basis");
}

Int Sublattice::index() const {
  if (!full_rank()) throw LatticeError("index of a non-full-rank lattice is infinite");
  Int p = 1;
  for (std::size_t i = 0; i < basis.rows; ++i) p *= basis(i, i);
  return p;
}

Int FiniteAbelianGroup::order() const {
  Int p = 1;
  for (const auto& f : invariant_factors) p *= f;
  return p;
}

std::string FiniteAbelianGroup::to_string() const {
  if (invariant_factors.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < invariant_factors.size(); ++i) {
    if (i) s += " x ";
    s += "Z/" + invariant_factors[i].get_str();
  }
  return s;
}

namespace {

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

void axpy(IntVec& y, const Int& a, const IntVec& x) {
  if (a == 0) return;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= a * x[i];
}

// Euclidean elimination in column c among `rows`; returns the single row left
// with a nonzero entry there (removed from `rows`), or nullopt-like empty vector.
IntVec extract_pivot(std::vector<IntVec>& rows, std::size_t c) {
  for (;;) {
    std::ptrdiff_t best = -1;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      ++nonzero;
      if (best < 0 || abs(rows[i][c]) < abs(rows[static_cast<std::size_t>(best)][c]))
        best = static_cast<std::ptrdiff_t>(i);
    }
    if (best < 0) return {};
    auto b = static_cast<std::size_t>(best);
    if (nonzero == 1) {
      IntVec p = std::move(rows[b]);
      rows.erase(rows.begin() + best);
      if (p[c] < 0)
        for (auto& x : p) x = -x;
      return p;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == b || rows[i][c] == 0) continue;
      Int q;
      mpz_tdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[b][c].get_mpz_t());
      axpy(rows[i], q, rows[b]);
    }
  }
}

}  // namespace

Sublattice hnf_canonicalize(const std::vector<IntVec>& generators, std::size_t n) {
  std::vector<IntVec> active;
  for (const auto& g : generators) {
    if (g.size() != n) throw LatticeError("generator length mismatch");
    if (!is_zero(g)) active.push_back(g);
  }
  std::vector<IntVec> found;
  for (std::size_t c = n; c-- > 0;) {
    IntVec p = extract_pivot(active, c);
    if (!p.empty()) found.push_back(std::move(p));
    std::erase_if(active, is_zero);
  }
  std::reverse(found.begin(), found.end());

  std::vector<std::size_t> piv(found.size());
  for (std::size_t i = 0; i < found.size(); ++i)
    for (std::size_t c = n; c-- > 0;)
      if (found[i][c] != 0) {
        piv[i] = c;
        break;
      }
  for (std::size_t k = 0; k < found.size(); ++k) {
    for (std::size_t i = k; i-- > 0;) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), found[k][piv[i]].get_mpz_t(), found[i][piv[i]].get_mpz_t());
      axpy(found[k], q, found[i]);
    }
  }
  Sublattice s;
  s.ambient_rank = n;
  s.basis = IntMatrix::from_rows(found, n);
  return s;
}

Sublattice hnf_canonicalize(const IntMatrix& generators) {
  return hnf_canonicalize(generators.row_list(), generators.cols);
}

Sublattice sublattice_from_congruences(std::size_t n, const std::vector<Congruence>& congruences) {
  // Kernel of Z^n -> (+)Z/n_k: left kernel of [C | diag(n_k)] restricted to
  // the first n coordinates.
  const std::size_t k = congruences.size();
  IntMatrix a(n + k, k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& cg = congruences[j];
    if (cg.c.size() != n) throw LatticeError("congruence length mismatch");
    if (cg.modulus < 1) throw LatticeError("congruence modulus must be >= 1");
    for (std::size_t i = 0; i < n; ++i) a(i, j) = cg.c[i];
    a(n + j, j) = cg.modulus;
  }
  Sublattice ker = integer_left_kernel(a);
  std::vector<IntVec> gens;
  for (std::size_t r = 0; r < ker.basis.rows; ++r) {
    IntVec row = ker.basis.row(r);
    row.resize(n);
    gens.push_back(std::move(row));
  }
  return hnf_canonicalize(gens, n);
}

bool contains(const Sublattice& lat, const IntVec& v) {
  if (v.size() != lat.ambient_rank) throw LatticeError("dimension mismatch in contains");
  IntVec w = v;
  for (std::size_t i = lat.basis.rows; i-- > 0;) {
    std::size_t p = lat.pivot(i);
    for (std::size_t c = p + 1; c < w.size(); ++c)
      if (w[c] != 0) return false;
    const Int& piv = lat.basis(i, p);
    if (!mpz_divisible_p(w[p].get_mpz_t(), piv.get_mpz_t())) return false;
    Int q = w[p] / piv;
    axpy(w, q, lat.basis.row(i));
  }
  return is_zero(w);
}

std::vector<Int> smith_diagonal(const IntMatrix& a) {
  IntMatrix m = a;
  const std::size_t R = m.rows, C = m.cols;
  std::vector<Int> diag;
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    // Find smallest nonzero entry in the trailing block.
    auto find_min = [&](std::size_t& br, std::size_t& bc) {
      bool any = false;
      for (std::size_t r = t; r < R; ++r)
        for (std::size_t c = t; c < C; ++c)
          if (m(r, c) != 0 && (!any || abs(m(r, c)) < abs(m(br, bc)))) {
            br = r;
            bc = c;
            any = true;
          }
      return any;
    };
    auto bring = [&](std::size_t br, std::size_t bc) {
      if (br != t)
        for (std::size_t c = 0; c < C; ++c) std::swap(m(t, c), m(br, c));
      if (bc != t)
        for (std::size_t r = 0; r < R; ++r) std::swap(m(r, t), m(r, bc));
    };
    std::size_t br = 0, bc = 0;
    if (!find_min(br, bc)) break;
    bring(br, bc);
    for (;;) {
      bool dirty = false;
      for (std::size_t r = t + 1; r < R; ++r) {
        if (m(r, t) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), m(r, t).get_mpz_t(), m(t, t).get_mpz_t());
        for (std::size_t c = t; c < C; ++c) m(r, c) -= q * m(t, c);
        if (m(r, t) != 0) dirty = true;
      }
      for (std::size_t c = t + 1; c < C; ++c) {
        if (m(t, c) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), m(t, c).get_mpz_t(), m(t, t).get_mpz_t());
        for (std::size_t r = t; r < R; ++r) m(r, c) -= q * m(r, t);
        if (m(t, c) != 0) dirty = true;
      }
      if (dirty) {
        // Move the smallest remainder in row/column t into the pivot.
        std::size_t pr = t, pc = t;
        for (std::size_t r = t + 1; r < R; ++r)
          if (m(r, t) != 0 && abs(m(r, t)) < abs(m(pr, pc))) pr = r, pc = t;
        for (std::size_t c = t + 1; c < C; ++c)
          if (m(t, c) != 0 && abs(m(t, c)) < abs(m(pr, pc))) pr = t, pc = c;
        bring(pr, pc);
        continue;
      }
      // Enforce divisibility of the trailing block by the pivot.
      bool fixed = true;
      for (std::size_t r = t + 1; r < R && fixed; ++r)
        for (std::size_t c = t + 1; c < C; ++c)
          if (!mpz_divisible_p(m(r, c).get_mpz_t(), m(t, t).get_mpz_t())) {
            for (std::size_t cc = t; cc < C; ++cc) m(t, cc) += m(r, cc);
            fixed = false;
            break;
          }
      if (fixed) break;
    }
    diag.push_back(abs(m(t, t)));
  }
  return diag;
}

FiniteAbelianGroup cokernel(const IntMatrix& relations) {
  auto diag = smith_diagonal(relations);
  if (diag.size() != relations.cols) throw LatticeError("quotient group is infinite");
  FiniteAbelianGroup g;
  for (auto& x : diag)
    if (x != 1) g.invariant_factors.push_back(x);
  return g;
}

std::size_t cokernel_free_rank(const IntMatrix& relations) {
  return relations.cols - smith_diagonal(relations).size();
}

FiniteAbelianGroup quotient_group(std::size_t n, const Sublattice& lat) {
  if (lat.ambient_rank != n) throw LatticeError("ambient rank mismatch");
  if (!lat.full_rank()) throw LatticeError("quotient group is infinite");
  return cokernel(lat.basis);
}

Sublattice integer_left_kernel(const IntMatrix& a) {
  // Row-reduce [a | I] on the first a.cols columns; rows whose a-part
  // vanishes carry a basis of the kernel in their identity part.
  std::vector<IntVec> rows;
  for (std::size_t r = 0; r < a.rows; ++r) {
    IntVec row(a.cols + a.rows);
    for (std::size_t c = 0; c < a.cols; ++c) row[c] = a(r, c);
    row[a.cols + r] = 1;
    rows.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < a.cols; ++c) extract_pivot(rows, c);
  std::vector<IntVec> ker;
  for (auto& row : rows) ker.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(a.cols), row.end());
  return hnf_canonicalize(ker, a.rows);
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(std::vector<RatVec>& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[r], m[p]);
    Rat inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rational_rank(std::vector<RatVec> rows) { return rref(rows).size(); }

bool rational_solve_left(const std::vector<RatVec>& a, const RatVec& b, RatVec& x) {
  // x * a = b  <=>  a^T x^T = b^T. Augment the transpose.
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<RatVec> aug(m, RatVec(n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[j][i];
    aug[i][n] = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == n) return false;
  x.assign(n, Rat(0));
  for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = aug[k][n];
  return true;
}

std::vector<RatVec> rational_nullspace(std::vector<RatVec> rows, std::size_t cols) {
  auto piv = rref(rows);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<RatVec> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RatVec x(cols, Rat(0));
    x[f] = 1;
    for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = -rows[k][f];
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<RatVec> rational_inverse(const std::vector<RatVec>& a) {
  const std::size_t n = a.size();
  std::vector<RatVec> aug(n, RatVec(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw LatticeError("inverse of a non-square matrix");
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) throw LatticeError("singular matrix");
  std::vector<RatVec> inv(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

Rat rational_det(std::vector<RatVec> a) {
  const std::size_t n = a.size();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rat f = a[i][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[i][k] -= f * a[c][k];
    }
  }
  return det;
}

RationalLatticeBasis dual_lattice(const Sublattice& lat) {
  if (!lat.full_rank()) throw LatticeError("dual of a non-full-rank lattice");
  RationalLatticeBasis b;
  for (const auto& r : lat.basis.row_list()) b.basis.push_back(to_rat(r));
  return dual_lattice(b);
}

RationalLatticeBasis dual_lattice(const RationalLatticeBasis& lat) {
  auto inv = rational_inverse(lat.basis);
  RationalLatticeBasis out;
  const std::size_t n = inv.size();
  out.basis.assign(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.basis[i][j] = inv[j][i];
  return out;
}

Int dot(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat dot(const RatVec& a, const IntVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVec to_rat(const IntVec& v) {
  RatVec r;
  r.reserve(v.size());
  for (const auto& x : v) r.emplace_back(x);
  return r;
}

Int lcm_of(const std::vector<Int>& xs) {
  Int l = 1;
  for (const auto& x : xs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_mpz_t());
  return l;
}

std::string to_string(const Rat& q) {
  Rat c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

}  // namespace mirrorcone
