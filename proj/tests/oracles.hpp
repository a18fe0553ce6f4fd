#pragma once

// Independent brute-force routines used as test oracles. They deliberately
// avoid the library's normal forms.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using Vec = std::vector<long>;

inline long mod(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

/// Subgroup of (Z/N)^n generated by `gens`, by breadth-first closure.
inline std::set<Vec> subgroup_mod(const std::vector<Vec>& gens, long N, std::size_t n) {
  std::set<Vec> seen{Vec(n, 0)};
  std::vector<Vec> frontier{Vec(n, 0)};
  while (!frontier.empty()) {
    std::vector<Vec> next;
    for (const auto& v : frontier)
      for (const auto& g : gens) {
        Vec w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = mod(v[i] + g[i], N);
        if (seen.insert(w).second) next.push_back(w);
      }
    frontier = std::move(next);
  }
  return seen;
}

/// Index of a lattice containing N*Z^n, counted as N^n / |L mod N|.
inline long index_by_cosets(const std::vector<Vec>& gens, long N, std::size_t n) {
  long total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= N;
  return total / static_cast<long>(subgroup_mod(gens, N, n).size());
}

inline long det3(const std::vector<Vec>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Solves a square system by Gauss-Jordan elimination; false if singular.
inline bool solve_square(std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> b, std::vector<mpq_class>& x) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return false;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      mpq_class f = a[i][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[i][k] -= f * a[c][k];
      b[i] -= f * b[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

/// Full-dimensional lower cells of {(x_k, h_k)}: every (dim+1)-subset spanning
/// a hyperplane with all lifted points on or above it contributes the set of
/// points on it.
inline std::set<std::vector<std::size_t>> lower_cells_bruteforce(const std::vector<Vec>& xs,
                                                                  const std::vector<mpq_class>& h) {
  const std::size_t n = xs.size();
  const std::size_t dim = xs[0].size();
  std::set<std::vector<std::size_t>> cells;
  std::vector<std::size_t> c(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) c[i] = i;
  while (true) {
    std::vector<std::vector<mpq_class>> a;
    std::vector<mpq_class> b;
    for (auto k : c) {
      std::vector<mpq_class> row;
      for (long v : xs[k]) row.emplace_back(v);
      row.emplace_back(1);
      a.push_back(row);
      b.push_back(h[k]);
    }
    std::vector<mpq_class> f;
    if (solve_square(a, b, f)) {
      bool below = true;
      std::vector<std::size_t> eq;
      for (std::size_t k = 0; k < n && below; ++k) {
        mpq_class v = f[dim];
        for (std::size_t i = 0; i < dim; ++i) v += f[i] * xs[k][i];
        if (v > h[k]) below = false;
        if (v == h[k]) eq.push_back(k);
      }
      if (below) cells.insert(eq);
    }
    std::size_t i = dim + 1;
    while (i > 0 && c[i - 1] == n - (dim + 1) + i - 1) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j <= dim; ++j) c[j] = c[j - 1] + 1;
  }
  return cells;
}

}  // namespace oracle

namespace oracle {

/// Rank by Gaussian elimination over Q.
inline std::size_t rank_q(std::vector<std::vector<mpq_class>> a) {
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      if (a[i][c] == 0) continue;
      mpq_class f = a[i][c] / a[r][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    ++r;
  }
  return r;
}

/// Cohomology of contraction with dW_0, W_0 = -(z_0 ... z_{n-1}), on
/// C[z][theta_0..theta_{n-1}] for one block, by enumerating every z^b theta^K
/// with |b| <= bound and grouping by the class of (2|b| - |K|, e_K - b).
/// Returns dims keyed by (j, m) with min(m) = 0.
inline std::map<std::pair<long, Vec>, long> koszul_single_block(std::size_t n, long bound) {
  using Key = std::pair<long, Vec>;
  auto key_of = [&](const Vec& b, unsigned K) {
    long j = 0;
    Vec m(n);
    for (std::size_t i = 0; i < n; ++i) {
      j += 2 * b[i] - static_cast<long>(K >> i & 1);
      m[i] = static_cast<long>(K >> i & 1) - b[i];
    }
    long lo = *std::min_element(m.begin(), m.end());
    for (auto& x : m) x -= lo;
    return Key{j + 2 * (static_cast<long>(n) - 1) * lo, m};
  };
  std::map<Key, std::vector<std::pair<Vec, unsigned>>> groups;
  Vec b(n, 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long left) {
    if (i == n) {
      for (unsigned K = 0; K < (1u << n); ++K) groups[key_of(b, K)].push_back({b, K});
      return;
    }
    for (long x = 0; x <= left; ++x) {
      b[i] = x;
      rec(i + 1, left - x);
    }
    b[i] = 0;
  };
  rec(0, bound);

  // Rank of the contraction out of each group.
  std::map<Key, long> out_rank;
  for (const auto& [key, elems] : groups) {
    std::map<std::pair<Vec, unsigned>, std::size_t> col;
    std::vector<std::vector<std::pair<std::pair<Vec, unsigned>, int>>> images;
    for (const auto& [bb, K] : elems) {
      std::vector<std::pair<std::pair<Vec, unsigned>, int>> img;
      for (std::size_t k = 0; k < n; ++k) {
        if (!(K >> k & 1)) continue;
        int below = __builtin_popcount(K & ((1u << k) - 1));
        Vec z = bb;
        for (std::size_t i = 0; i < n; ++i)
          if (i != k) z[i] += 1;
        img.push_back({{z, K ^ (1u << k)}, below % 2 ? 1 : -1});
        col.emplace(img.back().first, 0);
      }
      images.push_back(img);
    }
    std::size_t c = 0;
    for (auto& [k, v] : col) v = c++;
    std::vector<std::vector<mpq_class>> mat;
    for (const auto& img : images) {
      std::vector<mpq_class> row(col.size(), 0);
      for (const auto& [t, s] : img) row[col[t]] += s;
      mat.push_back(row);
    }
    out_rank[key] = static_cast<long>(rank_q(mat));
  }
  std::map<Key, long> dims;
  for (const auto& [key, elems] : groups) {
    Key prev{key.first - 1, key.second};
    long in = out_rank.count(prev) ? out_rank[prev] : 0;
    dims[key] = static_cast<long>(elems.size()) - out_rank[key] - in;
  }
  return dims;
}

}  // namespace oracle
