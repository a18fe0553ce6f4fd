#include "mirrorcone/grading.hpp"

#include <algorithm>
#include <memory>

namespace mirrorcone {

GradingDatum GradingDatum::make(std::string name, std::size_t rank, const std::vector<IntVec>& relations) {
  GradingDatum g;
  g.name = std::move(name);
  g.rank = rank;
  g.relations = IntMatrix::from_rows(relations, rank + 1);
  g.relation_lattice = hnf_canonicalize(relations, rank + 1);
  return g;
}

bool GradingDatum::sign_well_defined() const {
  for (std::size_t r = 0; r < relations.rows; ++r)
    if (mpz_odd_p(relations(r, 0).get_mpz_t())) return false;
  // The HNF rows are integer combinations, so they inherit the parity.
  return true;
}

IntVec GDeg::flat() const {
  IntVec v;
  v.reserve(m.size() + 1);
  v.push_back(j);
  v.insert(v.end(), m.begin(), m.end());
  return v;
}

GDeg GDeg::operator+(const GDeg& o) const {
  if (datum != o.datum) throw std::invalid_argument("degree datum mismatch");
  GDeg r = *this;
  r.j += o.j;
  for (std::size_t i = 0; i < m.size(); ++i) r.m[i] += o.m[i];
  return r;
}

GDeg GDeg::operator-(const GDeg& o) const { return *this + o.scaled(-1); }

GDeg GDeg::scaled(const Int& k) const {
  GDeg r = *this;
  r.j *= k;
  for (auto& x : r.m) x *= k;
  return r;
}

GDeg make_deg(const GradingDatum& g, const Int& j, IntVec m) {
  if (m.size() != g.rank) throw std::invalid_argument("degree rank mismatch for " + g.name);
  return GDeg{&g, j, std::move(m)};
}

bool deg_equal(const GDeg& a, const GDeg& b) {
  if (a.datum != b.datum || a.datum == nullptr) throw std::invalid_argument("degree datum mismatch");
  return contains(a.datum->relation_lattice, (a - b).flat());
}

std::optional<Int> z_part(const GDeg& x) {
  const GradingDatum& g = *x.datum;
  std::vector<RatVec> mparts;
  for (const auto& r : g.relations.row_list()) mparts.push_back(to_rat(IntVec(r.begin() + 1, r.end())));
  IntVec neg = x.m;
  for (auto& e : neg) e = -e;
  Int j = x.j;
  if (!mparts.empty()) {
    RatVec c;
    if (!rational_solve_left(mparts, to_rat(neg), c)) return std::nullopt;
    Rat shift = 0;
    for (std::size_t k = 0; k < c.size(); ++k) shift += c[k] * g.relations(k, 0);
    if (shift.get_den() != 1) return std::nullopt;
    j += shift.get_num();
  } else if (std::any_of(x.m.begin(), x.m.end(), [](const Int& e) { return e != 0; })) {
    return std::nullopt;
  }
  if (!deg_equal(make_deg(g, j, IntVec(g.rank, 0)), x)) return std::nullopt;
  return j;
}

GDeg GradingMorphism::apply(const GDeg& x) const {
  if (x.datum != source) throw std::invalid_argument("morphism " + name + " applied to wrong datum");
  GDeg y;
  y.datum = target;
  Rat shift = dot(j_from_m, x.m);
  if (shift.get_den() != 1) throw std::invalid_argument("morphism " + name + " applied outside its domain");
  y.j = x.j + shift.get_num();
  y.m.assign(target->rank, 0);
  for (std::size_t i = 0; i < source->rank; ++i)
    for (std::size_t k = 0; k < target->rank; ++k) y.m[k] += x.m[i] * m_map(i, k);
  return y;
}

bool GradingMorphism::well_defined() const {
  for (const auto& rel : source->relations.row_list()) {
    GDeg x{source, rel[0], IntVec(rel.begin() + 1, rel.end())};
    GDeg y = apply(x);
    if (!deg_equal(y, make_deg(*target, 0, IntVec(target->rank, 0)))) return false;
  }
  return true;
}

IntVec default_volume_vector(const ValidatedToricData& vt) {
  IntVec v(vt.n, 1);
  for (const auto& b : vt.blocks) v[b.back()] = 0;
  return v;
}

std::unique_ptr<GradingData> build_grading_data(const ValidatedToricData& vt, std::optional<IntVec> v) {
  const std::size_t n = vt.n;
  auto gd = std::make_unique<GradingData>();
  gd->volume = v ? *v : (vt.input.v ? *vt.input.v : default_volume_vector(vt));
  if (gd->volume.size() != n) throw std::invalid_argument("volume vector has wrong length");

  auto row = [&](const Int& j, const IntVec& m) {
    IntVec r{j};
    r.insert(r.end(), m.begin(), m.end());
    return r;
  };

  gd->Z = GradingDatum::make("Z", 0, {});

  std::vector<IntVec> g_rel, gt_rel, gd_rel;
  for (std::size_t j = 0; j < vt.r; ++j) {
    IntVec e = vt.block_indicator(j);
    g_rel.push_back(row(0, e));
    gt_rel.push_back(row(Int(2) * (1 - static_cast<long>(vt.blocks[j].size())), e));
  }
  gd->G = GradingDatum::make("G", n, g_rel);
  gd->G.m_domain = vt.M_bar;
  gd->G_tilde = GradingDatum::make("G_tilde", n, gt_rel);

  for (const auto& m : vt.M_bar.basis.row_list()) {
    Rat p = dot(vt.n_sigma, m);
    IntVec neg = m;
    for (auto& x : neg) x = -x;
    gd_rel.push_back(row(Int(2) * p.get_num(), neg));
  }
  gd->G_Delta = GradingDatum::make("G_Delta", n, gd_rel);
  gd->G_MF = GradingDatum::make("G_MF", 1, {IntVec{2, -vt.d}});

  auto ident = IntMatrix::identity(n);
  IntMatrix neg_ident(n, n);
  for (std::size_t i = 0; i < n; ++i) neg_ident(i, i) = -1;

  // p(k, m) = (k + 2<n_sigma - e_I, m>, m)
  RatVec pc(n);
  for (std::size_t i = 0; i < n; ++i) pc[i] = Rat(2) * vt.n_sigma[i] - 2;
  gd->p = {"p", &gd->G, &gd->G_tilde, pc, ident};
  gd->q = {"q", &gd->G, &gd->Z, RatVec(n, 0), IntMatrix(n, 0)};
  gd->r = {"r", &gd->G_tilde, &gd->G_Delta, RatVec(n, 2), neg_ident};
  gd->s = {"s", &gd->Z, &gd->G_Delta, {}, IntMatrix(0, n)};
  IntMatrix tq(n, 1);
  for (std::size_t i = 0; i < n; ++i) tq(i, 0) = vt.q[i];
  gd->t = {"t", &gd->G_Delta, &gd->G_MF, RatVec(n, 0), tq};
  gd->u = {"u", &gd->Z, &gd->G_MF, {}, IntMatrix(0, 1)};
  RatVec vc = to_rat(gd->volume);
  for (auto& x : vc) x *= 2;
  gd->v = {"v", &gd->G_tilde, &gd->Z, vc, IntMatrix(n, 0)};
  return gd;
}

namespace {

IntVec unit(std::size_t n, std::size_t i, long s) {
  IntVec e(n, 0);
  e[i] = s;
  return e;
}

}  // namespace

GDeg deg_z_tilde(const GradingData& gd, std::size_t i) { return make_deg(gd.G_tilde, 2, unit(gd.G_tilde.rank, i, -1)); }
GDeg deg_z_delta(const GradingData& gd, std::size_t i) { return make_deg(gd.G_Delta, 0, unit(gd.G_Delta.rank, i, 1)); }
GDeg deg_theta(const GradingData& gd, std::size_t i) { return make_deg(gd.G_tilde, -1, unit(gd.G_tilde.rank, i, 1)); }
GDeg deg_phi(const GradingData& gd, std::size_t i) { return make_deg(gd.G_tilde, 1, unit(gd.G_tilde.rank, i, -1)); }
GDeg deg_r_p(const GradingData& gd, const IntVec& p) { return make_deg(gd.G, 0, p); }

GDeg deg_monomial_tilde(const GradingData& gd, const IntVec& a) {
  Int total = 0;
  IntVec m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += a[i];
    m[i] = -a[i];
  }
  return make_deg(gd.G_tilde, 2 * total, m);
}

bool square_holds_at(const GradingData& gd, const Int& k, const IntVec& m) {
  GDeg x = make_deg(gd.G, k, m);
  return deg_equal(gd.s.apply(gd.q.apply(x)), gd.r.apply(gd.p.apply(x)));
}

bool check_commutative_square(const GradingData& gd, const ValidatedToricData& vt) {
  if (!square_holds_at(gd, 1, IntVec(vt.n, 0))) return false;
  for (const auto& m : vt.M_bar.basis.row_list())
    if (!square_holds_at(gd, 0, m)) return false;
  return true;
}

namespace {

// m-parts of the relators of a datum.
std::vector<IntVec> m_relations(const GradingDatum& g) {
  std::vector<IntVec> out;
  for (const auto& r : g.relations.row_list()) out.emplace_back(r.begin() + 1, r.end());
  return out;
}

// {x in Z^n : x * A lies in the span of `target_rows`}.
Sublattice preimage(const IntMatrix& A, const std::vector<IntVec>& target_rows, std::size_t n) {
  const std::size_t k = A.cols;
  IntMatrix stacked(n + target_rows.size(), k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < k; ++c) stacked(i, c) = A(i, c);
  for (std::size_t t = 0; t < target_rows.size(); ++t)
    for (std::size_t c = 0; c < k; ++c) stacked(n + t, c) = target_rows[t][c];
  auto ker = integer_left_kernel(stacked);
  std::vector<IntVec> xs;
  for (const auto& r : ker.basis.row_list()) xs.emplace_back(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n));
  return hnf_canonicalize(xs, n);
}

IntVec map_m(const GradingMorphism& f, const IntVec& m) {
  return f.apply(make_deg(*f.source, 0, m)).m;
}

}  // namespace

FiniteAbelianGroup coker_H(const GradingData& gd, const ValidatedToricData& vt) {
  const std::size_t n = vt.n;
  // ker(G_tilde/Z -> G_Delta/Z) = P / R with P the preimage of the G_Delta
  // relation lattice under r.
  Sublattice P = preimage(gd.r.m_map, m_relations(gd.G_Delta), n);
  std::vector<RatVec> pbasis;
  for (const auto& r : P.basis.row_list()) pbasis.push_back(to_rat(r));

  std::vector<IntVec> gens = m_relations(gd.G_tilde);
  for (const auto& m : vt.M_bar.basis.row_list()) gens.push_back(map_m(gd.p, m));

  std::vector<IntVec> coords;
  for (const auto& g : gens) {
    RatVec c;
    if (!rational_solve_left(pbasis, to_rat(g), c)) throw std::logic_error("image of p leaves the kernel of r");
    IntVec ci;
    for (const auto& x : c) {
      if (x.get_den() != 1) throw std::logic_error("image of p leaves the kernel of r");
      ci.push_back(x.get_num());
    }
    coords.push_back(ci);
  }
  return cokernel(IntMatrix::from_rows(coords, P.rank()));
}

bool p_injective_mod_Z(const GradingData& gd, const ValidatedToricData& vt) {
  const std::size_t n = vt.n;
  // Coordinates c over the M_bar basis with p(c * B) in the G_tilde relations.
  IntMatrix BA(n, n);
  auto B = vt.M_bar.basis.row_list();
  for (std::size_t i = 0; i < n; ++i) {
    IntVec img = map_m(gd.p, B[i]);
    for (std::size_t k = 0; k < n; ++k) BA(i, k) = img[k];
  }
  Sublattice C = preimage(BA, m_relations(gd.G_tilde), n);
  Sublattice rel = hnf_canonicalize(m_relations(gd.G), n);
  for (const auto& c : C.basis.row_list()) {
    IntVec x(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) x[k] += c[i] * B[i][k];
    if (!contains(rel, x)) return false;
  }
  return true;
}

}  // namespace mirrorcone
