#include "mirrorcone/bside.hpp"

#include <algorithm>
#include <bit>

namespace mirrorcone {

Superpotential build_superpotential(const ValidatedToricData& vt, const std::map<IntVec, Rat>& b_valuations) {
  Superpotential w;
  w.n = vt.n;
  for (std::size_t j = 0; j < vt.r; ++j) w.terms.push_back({-1, std::nullopt, vt.block_indicator(j), true, j});

  std::map<IntVec, Rat> lambda;
  if (vt.input.lambda.kind != LambdaSpec::Kind::None) lambda = resolve_lambda(vt, vt.input.lambda);
  for (const auto& [p, val] : b_valuations)
    if (!std::binary_search(vt.Xi0.begin(), vt.Xi0.end(), p))
      throw ValidationError(ValidationError::Kind::UnknownMonomial,
                            "valuation key " + exponent_key(p) + " is not in Xi0", p);

  for (const auto& p : vt.Xi0) {
    WTerm t;
    t.exp = p;
    if (auto it = b_valuations.find(p); it != b_valuations.end())
      t.val = it->second;
    else if (auto jt = lambda.find(p); jt != lambda.end())
      t.val = jt->second;
    w.terms.push_back(t);
  }

  for (const auto& t : w.terms) {
    if (dot(vt.q, t.exp) != vt.d) throw BsideError("term " + exponent_key(t.exp) + " is not weighted homogeneous");
    if (!contains(vt.M_bar, t.exp)) throw BsideError("term " + exponent_key(t.exp) + " is not in the lattice");
  }
  return w;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [k, c] : b) {
    auto& x = r[k];
    x += c;
    if (x == 0) r.erase(k);
  }
  return r;
}

Poly poly_scale(const Poly& a, const Int& k) {
  if (k == 0) return {};
  Poly r = a;
  for (auto& [key, c] : r) c *= k;
  return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      PolyKey k;
      k.z = ka.z;
      for (std::size_t i = 0; i < k.z.size(); ++i) k.z[i] += kb.z[i];
      k.syms = ka.syms;
      k.syms.insert(k.syms.end(), kb.syms.begin(), kb.syms.end());
      std::sort(k.syms.begin(), k.syms.end());
      auto& x = r[k];
      x += ca * cb;
      if (x == 0) r.erase(k);
    }
  return r;
}

namespace {

Poly term_poly(const Superpotential& w, std::size_t t, const IntVec& z) {
  const auto& term = w.terms[t];
  PolyKey k{z, {}};
  if (!term.block) k.syms.push_back(t);
  return Poly{{k, Int(term.sign)}};
}

Poly z_var(std::size_t n, std::size_t i, long coeff) {
  IntVec e(n, 0);
  e[i] = 1;
  return Poly{{PolyKey{e, {}}, Int(coeff)}};
}

int prefix_sign(std::uint32_t mask, std::size_t i) {
  return std::popcount(mask & ((std::uint32_t{1} << i) - 1)) % 2 ? -1 : 1;
}

void accumulate(ExtVec& out, std::uint32_t mask, const Poly& p) {
  if (p.empty()) return;
  auto& slot = out[mask];
  slot = poly_add(slot, p);
  if (slot.empty()) out.erase(mask);
}

}  // namespace

Poly w_as_poly(const Superpotential& w) {
  Poly r;
  for (std::size_t t = 0; t < w.terms.size(); ++t) r = poly_add(r, term_poly(w, t, w.terms[t].exp));
  return r;
}

ExtVec ExtOp::apply(const ExtVec& v) const {
  ExtVec out;
  for (const auto& [mask, coeff] : v)
    for (const auto& t : terms) {
      const std::uint32_t bit = std::uint32_t{1} << t.index;
      const bool has = mask & bit;
      if (t.wedge == has) continue;
      Poly c = poly_mul(t.coeff, coeff);
      accumulate(out, mask ^ bit, poly_scale(c, prefix_sign(mask, t.index)));
    }
  return out;
}

bool ext_equal(const ExtVec& a, const ExtVec& b) { return a == b; }

std::vector<Poly> split_superpotential(const Superpotential& w) {
  std::vector<Poly> split(w.n);
  for (std::size_t t = 0; t < w.terms.size(); ++t) {
    const IntVec& e = w.terms[t].exp;
    auto it = std::find_if(e.begin(), e.end(), [](const Int& x) { return x > 0; });
    if (it == e.end()) throw BsideError("constant term in superpotential");
    std::size_t i = static_cast<std::size_t>(it - e.begin());
    IntVec rest = e;
    rest[i] -= 1;
    split[i] = poly_add(split[i], term_poly(w, t, rest));
  }
  return split;
}

KoszulMF build_koszul_mf(const Superpotential& w) {
  if (w.terms.empty()) throw BsideError("zero potential");
  if (w.n > 24) throw BsideError("too many variables for the Koszul basis");
  KoszulMF k;
  k.n = w.n;
  k.W_split = split_superpotential(w);
  k.delta.n = w.n;
  for (std::size_t i = 0; i < w.n; ++i) {
    k.delta.terms.push_back({z_var(w.n, i, 1), false, i});
    if (!k.W_split[i].empty()) k.delta.terms.push_back({k.W_split[i], true, i});
  }
  // W = sum z_i W_i exactly.
  Poly sum;
  for (std::size_t i = 0; i < w.n; ++i) sum = poly_add(sum, poly_mul(z_var(w.n, i, 1), k.W_split[i]));
  if (sum != w_as_poly(w)) throw BsideError("FactorizationCheckFailed: W != sum z_i W_i");
  if (!check_factorization(k, w)) throw BsideError("FactorizationCheckFailed: delta^2 != W");
  return k;
}

bool check_factorization(const KoszulMF& k, const Superpotential& w) {
  const Poly W = w_as_poly(w);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << k.n); ++mask) {
    ExtVec e{{mask, Poly{{PolyKey{IntVec(k.n, 0), {}}, Int(1)}}}};
    ExtVec sq = k.delta.apply(k.delta.apply(e));
    if (!ext_equal(sq, ExtVec{{mask, W}})) return false;
  }
  return true;
}

namespace {

GDeg coeff_degree(const PolyKey& key, const Superpotential& w, const GradingData& gd) {
  GDeg d = deg_monomial_tilde(gd, key.z);
  for (auto t : key.syms) d = d + gd.p.apply(deg_r_p(gd, w.terms[t].exp));
  return d;
}

}  // namespace

bool check_delta_degree(const KoszulMF& k, const Superpotential& w, const GradingData& gd) {
  const GDeg one = make_deg(gd.G_tilde, 1, IntVec(k.n, 0));
  for (const auto& t : k.delta.terms) {
    GDeg phi = deg_phi(gd, t.index);
    GDeg shift = t.wedge ? phi : phi.scaled(-1);
    for (const auto& [key, c] : t.coeff)
      if (!deg_equal(coeff_degree(key, w, gd) + shift, one)) return false;
  }
  return true;
}

int epsilon_var_sign(const IntVec& v, std::size_t i) { return mpz_odd_p(v[i].get_mpz_t()) ? 1 : -1; }

int epsilon_coeff_sign(const ValidatedToricData& vt, const IntVec& v, const IntVec& p) {
  Rat e = dot(vt.n_sigma, p);
  for (std::size_t i = 0; i < vt.n; ++i) e += (v[i] - 1) * p[i];
  if (e.get_den() != 1) throw BsideError("non-integral sign exponent");
  return mpz_odd_p(e.get_num_mpz_t()) ? -1 : 1;
}

int epsilon_term_sign(const ValidatedToricData& vt, const IntVec& v, const WTerm& t) {
  int s = t.block ? 1 : epsilon_coeff_sign(vt, v, t.exp);
  for (std::size_t i = 0; i < vt.n; ++i)
    if (mpz_odd_p(t.exp[i].get_mpz_t()) && epsilon_var_sign(v, i) < 0) s = -s;
  return s;
}

bool check_wflips(const ValidatedToricData& vt, const Superpotential& w, const IntVec& v) {
  for (const auto& t : w.terms)
    if (epsilon_term_sign(vt, v, t) != -1) return false;
  return true;
}

namespace {

Poly apply_epsilon(const Poly& p, const Superpotential& w, const ValidatedToricData& vt, const IntVec& v) {
  Poly r;
  for (const auto& [key, c] : p) {
    int s = 1;
    for (std::size_t i = 0; i < vt.n; ++i)
      if (mpz_odd_p(key.z[i].get_mpz_t()) && epsilon_var_sign(v, i) < 0) s = -s;
    for (auto t : key.syms) s *= epsilon_coeff_sign(vt, v, w.terms[t].exp);
    r[key] = c * s;
  }
  return r;
}

bool ops_equal(const ExtOp& a, const ExtOp& b, std::size_t n) {
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    ExtVec e{{mask, Poly{{PolyKey{IntVec(n, 0), {}}, Int(1)}}}};
    if (!ext_equal(a.apply(e), b.apply(e))) return false;
  }
  return true;
}

// theta_S -> sign * d/dphi_{i1} ... d/dphi_{ik} (phi^top).
ExtVec comparison_image(std::uint32_t S, std::size_t n, bool with_sign) {
  const std::uint32_t top = (std::uint32_t{1} << n) - 1;
  ExtVec cur{{top, Poly{{PolyKey{IntVec(n, 0), {}}, Int(1)}}}};
  for (std::size_t i = n; i-- > 0;) {
    if (!(S >> i & 1)) continue;
    ExtOp d;
    d.n = n;
    d.terms.push_back({Poly{{PolyKey{IntVec(n, 0), {}}, Int(1)}}, false, i});
    cur = d.apply(cur);
  }
  if (with_sign && std::popcount(S) % 2) {
    for (auto& [m, p] : cur) p = poly_scale(p, -1);
  }
  return cur;
}

ExtVec apply_comparison(const ExtVec& v, std::size_t n, bool with_sign) {
  ExtVec out;
  for (const auto& [S, coeff] : v)
    for (const auto& [m, p] : comparison_image(S, n, with_sign)) accumulate(out, m, poly_mul(coeff, p));
  return out;
}

}  // namespace

DualResult dualize_mf(const KoszulMF& k, const Superpotential& w, const ValidatedToricData& vt,
                      const GradingData& gd, const IntVec& v) {
  const std::size_t n = k.n;
  DualResult res;
  res.dual.n = res.pulled_back.n = n;
  ExtOp closed;
  closed.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    res.dual.terms.push_back({z_var(n, i, -1), true, i});
    closed.terms.push_back({z_var(n, i, -1), true, i});
    if (!k.W_split[i].empty()) {
      res.dual.terms.push_back({k.W_split[i], false, i});
      closed.terms.push_back({poly_scale(k.W_split[i], -1), false, i});
    }
  }
  // Pull back along epsilon, then rescale theta_i by the sign of z_i.
  for (const auto& t : res.dual.terms) {
    Poly c = apply_epsilon(t.coeff, w, vt, v);
    res.pulled_back.terms.push_back({poly_scale(c, epsilon_var_sign(v, t.index)), t.wedge, t.index});
  }
  res.pulled_back_matches_closed_form = ops_equal(res.pulled_back, closed, n);

  res.intertwines = true;
  res.unsigned_map_anticommutes = true;
  for (std::uint32_t S = 0; S < (std::uint32_t{1} << n); ++S) {
    ExtVec e{{S, Poly{{PolyKey{IntVec(n, 0), {}}, Int(1)}}}};
    ExtVec pb = res.pulled_back.apply(e);
    if (!ext_equal(apply_comparison(pb, n, true), k.delta.apply(comparison_image(S, n, true))))
      res.intertwines = false;
    ExtVec lhs = apply_comparison(pb, n, false);
    ExtVec rhs = k.delta.apply(comparison_image(S, n, false));
    for (auto& [m, p] : rhs) p = poly_scale(p, -1);
    if (!ext_equal(lhs, rhs)) res.unsigned_map_anticommutes = false;
  }

  // theta_empty = 1 goes to +-phi^top.
  GDeg deg = make_deg(gd.G_tilde, 0, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) deg = deg + deg_phi(gd, i);
  res.map_degree = deg;
  auto z = z_part(deg);
  if (!z) throw BsideError("comparison map degree is not in the image of Z");
  res.iso_degree = *z;
  for (std::size_t i = 0; i < n; ++i) res.theta_signs.push_back(epsilon_var_sign(v, i));
  return res;
}

}  // namespace mirrorcone
