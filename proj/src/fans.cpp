#include "mirrorcone/fans.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <random>
#include <set>

#include "mirrorcone/parallel.hpp"

namespace mirrorcone {

namespace {

RatVec rat(const IntVec& v) { return to_rat(v); }

// Calls f on every k-subset of {0..n-1} in lex order; stops when f returns false.
template <class F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  while (true) {
    if (!f(c)) return;
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

std::size_t affine_rank(const std::vector<IntVec>& pts) {
  if (pts.empty()) return 0;
  std::vector<RatVec> rows;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RatVec d(pts[i].size());
    for (std::size_t c = 0; c < d.size(); ++c) d[c] = pts[i][c] - pts[0][c];
    rows.push_back(std::move(d));
  }
  return rows.empty() ? 0 : rational_rank(rows);
}

std::vector<std::size_t> equality_set(const ProjectedConfig& cfg, const std::vector<Rat>& w, const AffineFunctional& f) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < cfg.points.size(); ++k)
    if (f(cfg.points[k].coords) == w[k]) out.push_back(k);
  return out;
}

std::vector<IntVec> coords_of(const ProjectedConfig& cfg, const std::vector<std::size_t>& idx) {
  std::vector<IntVec> out;
  for (auto k : idx) out.push_back(cfg.points[k].coords);
  return out;
}

// A lower face of full dimension: raise a functional below all lifted points
// until its contact set spans.
AffineFunctional initial_face(const ProjectedConfig& cfg, const std::vector<Rat>& w) {
  const std::size_t dim = cfg.dim;
  AffineFunctional f{RatVec(dim, Rat(0)), *std::min_element(w.begin(), w.end())};
  while (true) {
    auto eq = equality_set(cfg, w, f);
    auto pts = coords_of(cfg, eq);
    if (affine_rank(pts) == dim) return f;
    // g vanishes on aff(eq) and is positive at some point outside it.
    std::vector<RatVec> dirs;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      RatVec d(dim);
      for (std::size_t c = 0; c < dim; ++c) d[c] = pts[i][c] - pts[0][c];
      dirs.push_back(std::move(d));
    }
    auto normals = rational_nullspace(dirs, dim);
    const IntVec& base = pts[0];
    AffineFunctional g;
    bool found = false;
    for (const auto& nv : normals) {
      for (std::size_t k = 0; k < cfg.points.size() && !found; ++k) {
        Rat val = 0;
        for (std::size_t c = 0; c < dim; ++c) val += nv[c] * (cfg.points[k].coords[c] - base[c]);
        if (val != 0) {
          Rat s = val > 0 ? Rat(1) : Rat(-1);
          g.a.assign(dim, Rat(0));
          for (std::size_t c = 0; c < dim; ++c) g.a[c] = s * nv[c];
          g.b = -dot(g.a, base);
          found = true;
        }
      }
      if (found) break;
    }
    if (!found) throw FanError(FanError::Kind::DegenerateConfig, "configuration does not span");
    std::optional<Rat> t;
    for (std::size_t k = 0; k < cfg.points.size(); ++k) {
      Rat gv = g(cfg.points[k].coords);
      if (gv <= 0) continue;
      Rat tk = (w[k] - f(cfg.points[k].coords)) / gv;
      if (!t || tk < *t) t = tk;
    }
    for (std::size_t c = 0; c < dim; ++c) f.a[c] += *t * g.a[c];
    f.b += *t * g.b;
  }
}

}  // namespace

Rat AffineFunctional::operator()(const IntVec& x) const { return dot(a, x) + b; }

IntVec project(const ProjectedConfig& cfg, const IntVec& m) {
  IntVec out;
  out.reserve(cfg.dim);
  for (std::size_t j = 0; j < cfg.blocks.size(); ++j) {
    const Int& last = m[cfg.blocks[j].back()];
    for (auto i : cfg.coord_index[j]) out.push_back(m[i] - last);
  }
  return out;
}

ProjectedConfig project_config(const ValidatedToricData& vt) {
  ProjectedConfig cfg;
  cfg.dim = vt.n - vt.r;
  cfg.blocks = vt.blocks;
  for (const auto& b : vt.blocks) cfg.coord_index.emplace_back(b.begin(), b.end() - 1);
  cfg.points.push_back({"origin", IntVec(cfg.dim, 0), IntVec(vt.n, 0), std::nullopt});
  for (const auto& p : vt.Xi0) {
    IntVec lift = p;
    for (const auto& b : vt.blocks) {
      Int lo = p[b[0]];
      for (auto i : b) lo = std::min(lo, Int(p[i]));
      for (auto i : b) lift[i] -= lo;
    }
    cfg.points.push_back({exponent_key(p), project(cfg, p), lift, p});
  }
  return cfg;
}

std::vector<Rat> config_weights(const ProjectedConfig& cfg, const std::map<IntVec, Rat>& lambda) {
  std::vector<Rat> w(cfg.points.size(), Rat(0));
  for (std::size_t k = 1; k < cfg.points.size(); ++k) {
    auto it = lambda.find(*cfg.points[k].source);
    if (it == lambda.end()) throw FanError(FanError::Kind::BadWeights, "no weight for " + cfg.points[k].id);
    w[k] = it->second;
  }
  return w;
}

std::vector<CellFacet> cell_facets(const ProjectedConfig& cfg, const std::vector<std::size_t>& cell) {
  const std::size_t dim = cfg.dim;
  std::vector<CellFacet> out;
  std::set<std::vector<std::size_t>> seen;
  auto pts = coords_of(cfg, cell);
  if (dim == 0) return out;
  for_each_combination(cell.size(), dim, [&](const std::vector<std::size_t>& c) {
    // Skip subsets already inside a known facet.
    for (const auto& f : out)
      if (std::all_of(c.begin(), c.end(), [&](std::size_t i) {
            return std::binary_search(f.points.begin(), f.points.end(), cell[i]);
          }))
        return true;
    std::vector<RatVec> rows;
    for (auto i : c) {
      RatVec r = rat(pts[i]);
      r.push_back(1);
      rows.push_back(std::move(r));
    }
    auto ker = rational_nullspace(rows, dim + 1);
    if (ker.size() != 1) return true;
    AffineFunctional g{RatVec(ker[0].begin(), ker[0].begin() + static_cast<long>(dim)), ker[0][dim]};
    int sign = 0;
    std::vector<std::size_t> eq;
    for (std::size_t i = 0; i < cell.size(); ++i) {
      Rat v = g(pts[i]);
      if (v == 0) {
        eq.push_back(cell[i]);
        continue;
      }
      int s = v > 0 ? 1 : -1;
      if (sign == 0) sign = s;
      if (s != sign) return true;
    }
    if (sign > 0) {
      for (auto& x : g.a) x = -x;
      g.b = -g.b;
    }
    if (seen.insert(eq).second) out.push_back({eq, g});
    return true;
  });
  std::sort(out.begin(), out.end(), [](const CellFacet& a, const CellFacet& b) { return a.points < b.points; });
  return out;
}

Subdivision regular_subdivision(const ProjectedConfig& cfg, const std::vector<Rat>& weights) {
  if (weights.size() != cfg.points.size()) throw FanError(FanError::Kind::BadWeights, "weight count mismatch");
  for (std::size_t k = 1; k < weights.size(); ++k)
    if (weights[k] <= 0) throw FanError(FanError::Kind::BadWeights, "weight of " + cfg.points[k].id + " is not positive");
  std::vector<IntVec> all;
  for (const auto& p : cfg.points) all.push_back(p.coords);
  if (affine_rank(all) != cfg.dim) throw FanError(FanError::Kind::DegenerateConfig, "points do not span");

  std::map<std::vector<std::size_t>, AffineFunctional> found;
  std::deque<AffineFunctional> queue{initial_face(cfg, weights)};
  found.emplace(equality_set(cfg, weights, queue.front()), queue.front());
  while (!queue.empty()) {
    AffineFunctional f = queue.front();
    queue.pop_front();
    auto cell = equality_set(cfg, weights, f);
    for (const auto& facet : cell_facets(cfg, cell)) {
      const auto& g = facet.outward;
      std::optional<Rat> t;
      for (std::size_t k = 0; k < cfg.points.size(); ++k) {
        Rat gv = g(cfg.points[k].coords);
        if (gv <= 0) continue;
        Rat tk = (weights[k] - f(cfg.points[k].coords)) / gv;
        if (!t || tk < *t) t = tk;
      }
      if (!t) continue;  // boundary ridge
      AffineFunctional nf = f;
      for (std::size_t c = 0; c < cfg.dim; ++c) nf.a[c] += *t * g.a[c];
      nf.b += *t * g.b;
      auto ncell = equality_set(cfg, weights, nf);
      if (found.emplace(ncell, nf).second) queue.push_back(nf);
    }
  }
  Subdivision sub;
  sub.weights = weights;
  for (auto& [cell, f] : found) {
    sub.cells.push_back(cell);
    sub.supports.push_back(f);
  }
  return sub;
}

namespace {

// Indices of block j where some lift in the set is positive.
std::set<std::size_t> block_support(const ProjectedConfig& cfg, const std::vector<std::size_t>& pts, std::size_t j) {
  std::set<std::size_t> s;
  for (auto k : pts)
    for (auto i : cfg.blocks[j])
      if (cfg.points[k].lift[i] > 0) s.insert(i);
  return s;
}

bool is_vertex(const ProjectedConfig& cfg, const std::vector<CellFacet>& facets, std::size_t k) {
  std::vector<RatVec> normals;
  for (const auto& f : facets)
    if (std::binary_search(f.points.begin(), f.points.end(), k)) normals.push_back(f.outward.a);
  return !normals.empty() && rational_rank(normals) == cfg.dim;
}

std::string cell_name(const ProjectedConfig& cfg, const std::vector<std::size_t>& cell) {
  std::string s = "{";
  for (std::size_t i = 0; i < cell.size(); ++i) s += (i ? " " : "") + cfg.points[cell[i]].id;
  return s + "}";
}

}  // namespace

ConditionReport check_mpcp(const Subdivision& sub, const ProjectedConfig& cfg) {
  ConditionReport rep;
  rep.is_triangulation = rep.refines_product_fan = rep.rays_are_xi0 = true;
  std::vector<bool> used(cfg.points.size(), false);
  for (std::size_t c = 0; c < sub.cells.size(); ++c) {
    const auto& cell = sub.cells[c];
    for (auto k : cell) used[k] = true;
    if (cell.size() != cfg.dim + 1) {
      rep.is_triangulation = false;
      rep.failures.push_back({c, "not a simplex: " + std::to_string(cell.size()) + " points"});
    }
    if (cell.empty() || cell.front() != 0) {
      rep.rays_are_xi0 = false;
      rep.failures.push_back({c, "cell does not contain the origin"});
    }
    if (cell.size() > cfg.dim + 1) {
      auto facets = cell_facets(cfg, cell);
      for (auto k : cell)
        if (!is_vertex(cfg, facets, k)) {
          rep.rays_are_xi0 = false;
          rep.failures.push_back({c, "point " + cfg.points[k].id + " is not a vertex"});
        }
    }
    std::vector<std::size_t> rays;
    for (auto k : cell)
      if (k != 0) rays.push_back(k);
    for (std::size_t j = 0; j < cfg.blocks.size(); ++j)
      if (block_support(cfg, rays, j).size() == cfg.blocks[j].size()) {
        rep.refines_product_fan = false;
        rep.failures.push_back({c, "not inside a cone of the product fan (block " + std::to_string(j + 1) + ")"});
      }
  }
  for (std::size_t k = 1; k < cfg.points.size(); ++k)
    if (!used[k]) {
      rep.rays_are_xi0 = false;
      rep.failures.push_back({sub.cells.size(), "point " + cfg.points[k].id + " is in no cell"});
    }
  rep.mpcp = rep.is_triangulation && rep.refines_product_fan && rep.rays_are_xi0;
  return rep;
}

void check_mpcs(ConditionReport& rep, const Subdivision& sub, const ProjectedConfig& cfg, const ValidatedToricData& vt) {
  rep.mpcs = false;
  if (!rep.mpcp) return;
  std::vector<IntVec> gens;
  for (const auto& row : vt.M_bar.basis.row_list()) gens.push_back(project(cfg, row));
  auto M = hnf_canonicalize(gens, cfg.dim);
  if (M.rank() != cfg.dim) throw FanError(FanError::Kind::DegenerateConfig, "projected lattice is not full rank");
  std::vector<RatVec> basis;
  for (const auto& r : M.basis.row_list()) basis.push_back(to_rat(r));

  std::set<std::vector<std::size_t>> cones;
  for (const auto& cell : sub.cells) {
    std::vector<std::size_t> rays(cell.begin() + 1, cell.end());
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << rays.size()); ++mask) {
      std::vector<std::size_t> cone;
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (mask >> i & 1) cone.push_back(rays[i]);
      cones.insert(cone);
    }
  }
  std::vector<std::vector<std::size_t>> list(cones.begin(), cones.end());
  std::vector<char> ok(list.size(), 1);
  parallel_for(list.size(), [&](std::size_t c) {
    const auto& cone = list[c];
    for (std::size_t j = 0; j < cfg.blocks.size(); ++j)
      if (block_support(cfg, cone, j).size() + 2 > cfg.blocks[j].size()) return;
    std::vector<IntVec> rows;
    for (auto k : cone) {
      RatVec x;
      if (!rational_solve_left(basis, to_rat(cfg.points[k].coords), x)) throw LatticeError("ray outside M");
      IntVec xi;
      for (const auto& e : x) {
        if (e.get_den() != 1) throw LatticeError("ray outside M");
        xi.push_back(e.get_num());
      }
      rows.push_back(std::move(xi));
    }
    auto diag = smith_diagonal(IntMatrix::from_rows(rows, cfg.dim));
    ok[c] = diag.size() == cone.size() && std::all_of(diag.begin(), diag.end(), [](const Int& x) { return x == 1; });
  });
  rep.mpcs = true;
  for (std::size_t c = 0; c < list.size(); ++c)
    if (!ok[c]) {
      rep.mpcs = false;
      rep.failures.push_back({sub.cells.size(), "cone " + cell_name(cfg, list[c]) + " is not unimodular"});
    }
}

namespace {

struct LiftCheck {
  LiftedCell cell;
  std::string failure;  // empty on success
};

// Barycentric coordinates of x in the simplex with the given vertices (rows);
// the vertices must be linearly independent.
std::optional<RatVec> barycentric_linear(const std::vector<IntVec>& verts, const IntVec& x) {
  std::vector<RatVec> a;
  for (const auto& v : verts) a.push_back(to_rat(v));
  RatVec mu;
  if (!rational_solve_left(a, to_rat(x), mu)) return std::nullopt;
  return mu;
}

bool in_cell(const ProjectedConfig& cfg, const std::vector<std::size_t>& cell, const IntVec& y) {
  // Affine barycentric coordinates: append 1 to every vector.
  std::vector<IntVec> verts;
  for (auto k : cell) {
    IntVec v = cfg.points[k].coords;
    v.push_back(1);
    verts.push_back(std::move(v));
  }
  IntVec yy = y;
  yy.push_back(1);
  auto mu = barycentric_linear(verts, yy);
  return mu && std::all_of(mu->begin(), mu->end(), [](const Rat& t) { return t >= 0; });
}

LiftCheck lift_cell(const ProjectedConfig& cfg, const std::vector<std::size_t>& cell, const ValidatedToricData& vt) {
  LiftCheck out;
  for (auto k : cell) {
    if (k == 0) {
      for (std::size_t j = 0; j < vt.r; ++j) out.cell.vertices.push_back(vt.block_indicator(j));
    } else {
      out.cell.vertices.push_back(*cfg.points[k].source);
    }
  }
  std::sort(out.cell.vertices.begin(), out.cell.vertices.end());
  out.cell.simplex = out.cell.vertices.size() == vt.n && affine_rank(out.cell.vertices) == vt.n - 1;
  if (!out.cell.simplex) {
    out.failure = "lifted cell is not a simplex";
    return out;
  }
  out.cell.covers = true;
  for (const auto& x : vt.Xi) {
    if (!in_cell(cfg, cell, project(cfg, x))) continue;
    auto mu = barycentric_linear(out.cell.vertices, x);
    if (!mu || std::any_of(mu->begin(), mu->end(), [](const Rat& t) { return t < 0; })) {
      out.cell.covers = false;
      out.cell.uncovered = x;
      out.failure = "point " + exponent_key(x) + " over the cell is outside the lifted simplex";
      return out;
    }
  }
  return out;
}

// |det| of the simplex in the hyperplane <q, m> = d restricted to coordinates K,
// measured after dropping the last coordinate of K.
Int face_volume(const std::vector<IntVec>& verts, const std::vector<std::size_t>& K) {
  const std::size_t k = K.size();
  if (k == 1) return 1;
  std::vector<RatVec> rows;
  for (std::size_t i = 1; i < verts.size(); ++i) {
    RatVec r;
    for (std::size_t c = 0; c + 1 < k; ++c) r.push_back(Rat(verts[i][K[c]] - verts[0][K[c]]));
    rows.push_back(std::move(r));
  }
  Rat det = rational_det(rows);
  return abs(det.get_num());
}

}  // namespace

LiftedSubdivision lift_subdivision(const Subdivision& sub, const ProjectedConfig& cfg, const ValidatedToricData& vt) {
  std::vector<LiftCheck> checks(sub.cells.size());
  parallel_for(sub.cells.size(), [&](std::size_t c) { checks[c] = lift_cell(cfg, sub.cells[c], vt); });
  LiftedSubdivision out;
  for (std::size_t c = 0; c < checks.size(); ++c) {
    if (!checks[c].failure.empty())
      throw FanError(FanError::Kind::CellLiftFailure,
                     "cell " + std::to_string(c) + " " + cell_name(cfg, sub.cells[c]) + ": " + checks[c].failure);
    out.cells.push_back(std::move(checks[c].cell));
  }
  return out;
}

Certificate certify_isolated_singularity(const ValidatedToricData& vt, const std::map<IntVec, Rat>& lambda) {
  Certificate cert;
  auto push = [&](std::string name, bool holds, std::string detail) {
    cert.chain.push_back({std::move(name), holds, std::move(detail)});
    if (!holds && !cert.failing_link) cert.failing_link = cert.chain.size() - 1;
    return holds;
  };

  auto cfg = project_config(vt);
  Subdivision sub;
  try {
    sub = regular_subdivision(cfg, config_weights(cfg, lambda));
  } catch (const FanError& e) {
    push("subdivision", false, e.what());
    return cert;
  }
  push("subdivision", true, std::to_string(sub.cells.size()) + " cells");

  auto rep = check_mpcp(sub, cfg);
  std::string why;
  if (!rep.failures.empty())
    why = "cell " + std::to_string(rep.failures[0].cell) + ": " + rep.failures[0].reason;
  if (!push("mpcp", rep.mpcp, why)) return cert;

  std::vector<LiftCheck> checks(sub.cells.size());
  parallel_for(sub.cells.size(), [&](std::size_t c) { checks[c] = lift_cell(cfg, sub.cells[c], vt); });
  for (std::size_t c = 0; c < checks.size(); ++c)
    if (!checks[c].cell.simplex) {
      push("lifted_simplices", false, "cell " + std::to_string(c) + " " + cell_name(cfg, sub.cells[c]));
      return cert;
    }
  push("lifted_simplices", true, "");
  for (std::size_t c = 0; c < checks.size(); ++c)
    if (!checks[c].cell.covers) {
      push("lifted_cover", false, "cell " + std::to_string(c) + ": " + checks[c].failure);
      return cert;
    }
  push("lifted_cover", true, "");

  // Every face of the simplex {m >= 0, <q,m> = d} cut out by a coordinate
  // subspace must be tiled by the lifted cells restricted to it.
  const std::size_t n = vt.n;
  std::vector<std::uint32_t> masks;
  for (std::uint32_t K = 1; K < (std::uint32_t{1} << n); ++K) masks.push_back(K);
  std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa > pb : a < b;
  });
  std::vector<std::string> bad(masks.size());
  parallel_for(masks.size(), [&](std::size_t t) {
    const std::uint32_t K = masks[t];
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (K >> i & 1) idx.push_back(i);
    std::vector<IntVec> corners;
    for (auto i : idx) {
      IntVec e(n, 0);
      e[i] = vt.d / vt.q[i];
      corners.push_back(e);
    }
    Int target = face_volume(corners, idx);
    std::set<std::vector<IntVec>> faces;
    for (const auto& ch : checks) {
      std::vector<IntVec> f;
      for (const auto& v : ch.cell.vertices) {
        bool inside = true;
        for (std::size_t i = 0; i < n; ++i)
          if (!(K >> i & 1) && v[i] != 0) inside = false;
        if (inside) f.push_back(v);
      }
      if (f.size() == idx.size()) faces.insert(f);
    }
    Int total = 0;
    for (const auto& f : faces) total += face_volume(f, idx);
    if (total != target) bad[t] = "volume " + total.get_str() + " != " + target.get_str();
  });
  for (std::size_t t = 0; t < masks.size(); ++t) {
    if (bad[t].empty()) continue;
    std::string k = "{";
    for (std::size_t i = 0; i < n; ++i)
      if (masks[t] >> i & 1) k += (k.size() > 1 ? "," : "") + std::to_string(i + 1);
    if (t > 0) push("triangulates_polytope", true, "");
    push(t == 0 ? "triangulates_polytope" : "triangulates_faces", false, "K = " + k + "}: " + bad[t]);
    return cert;
  }
  push("triangulates_polytope", true, "");
  push("triangulates_faces", true, std::to_string(masks.size() - 1) + " coordinate faces");
  cert.certified = true;
  return cert;
}

std::vector<Rat> perturb_weights(const std::vector<Rat>& weights, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> u(1, 1 << 20);
  std::vector<Rat> out = weights;
  Rat scale = Rat(1) / Rat(Int(1) << 40);
  for (std::size_t k = 1; k < out.size(); ++k) {
    Rat eps = scale * u(rng);
    eps.canonicalize();
    out[k] += eps;
  }
  return out;
}

}  // namespace mirrorcone
