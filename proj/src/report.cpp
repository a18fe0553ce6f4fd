#include "mirrorcone/report.hpp"

#include <functional>

#include "mirrorcone/bside.hpp"
#include "mirrorcone/fans.hpp"
#include "mirrorcone/grading.hpp"
#include "mirrorcone/koszulalg.hpp"

#ifndef MIRRORCONE_VERSION
#define MIRRORCONE_VERSION "0.0.0"
#endif

namespace mirrorcone {

using json = nlohmann::json;

namespace {

json int_json(const Int& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

json intvec_json(const IntVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(int_json(x));
  return a;
}

json subset_json(const Subset& s) {
  json a = json::array();
  for (auto i : s) a.push_back(i + 1);
  return a;
}

json subsets_json(const std::vector<Subset>& ss) {
  json a = json::array();
  for (const auto& s : ss) a.push_back(subset_json(s));
  return a;
}

json keys_json(const std::vector<IntVec>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(exponent_key(p));
  return a;
}

json group_json(const FiniteAbelianGroup& g) { return intvec_json(g.invariant_factors); }

int code_for(const std::exception& e) {
  if (auto* v = dynamic_cast<const ValidationError*>(&e))
    return v->kind == ValidationError::Kind::MalformedInput ? kExitInput : kExitDomain;
  if (auto* f = dynamic_cast<const FanError*>(&e)) return f->kind == FanError::Kind::CellLiftFailure ? kExitCertificate : kExitDomain;
  if (auto* k = dynamic_cast<const KoszulError*>(&e))
    return k->kind == KoszulError::Kind::CutoffTooSmall ? kExitInput : kExitCertificate;
  return kExitCertificate;
}

std::string what_of(const std::exception& e) {
  if (auto* v = dynamic_cast<const ValidationError*>(&e)) return kind_name(v->kind) + ": " + v->what();
  return e.what();
}

template <class F>
auto stage(const std::string& module, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ModuleError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModuleError(module, code_for(e), what_of(e));
  }
}

void check_keys(const ValidatedToricData& vt, const std::map<IntVec, Rat>& m, const std::string& field) {
  for (const auto& [p, x] : m)
    if (!std::binary_search(vt.Xi0.begin(), vt.Xi0.end(), p))
      throw ValidationError(ValidationError::Kind::UnknownMonomial, field + " key " + exponent_key(p) + " is not in Xi0", p);
}

/// lambda + 2^-20 (1 + |pi(p)|^2), then a seeded 2^-40 tie-break.
std::vector<Rat> perturbed(const ProjectedConfig& cfg, std::vector<Rat> w, unsigned long seed) {
  const Rat scale = Rat(1) / Rat(Int(1) << 20);
  for (std::size_t k = 1; k < w.size(); ++k) {
    Int nn = 1;
    for (const auto& c : cfg.points[k].coords) nn += c * c;
    w[k] += scale * Rat(nn);
  }
  return perturb_weights(w, seed);
}

struct Pipeline {
  const Config& cfg;
  AnalyzeResult& out;

  void fail_check(const std::string& module, const std::string& what) {
    out.diagnostics.push_back(module + ": " + what);
    out.code = kExitCertificate;
  }
};

}  // namespace

const std::vector<std::string>& section_names() {
  static const std::vector<std::string> names{"input", "conditions", "groups", "xi", "subdivision", "grading", "bside", "algebra"};
  return names;
}

ValidateResult validate_config(const Config& cfg) {
  try {
    auto vt = validate(cfg.input);
    if (cfg.input.lambda.kind == LambdaSpec::Kind::Map) check_keys(vt, cfg.input.lambda.values, "lambda");
    check_keys(vt, cfg.input.b_valuations, "b_valuations");
  } catch (const ValidationError& e) {
    return {e.kind == ValidationError::Kind::MalformedInput ? kExitInput : kExitDomain, kind_name(e.kind) + ": " + e.what()};
  }
  return {kExitOk, "ok"};
}

AnalyzeResult analyze(const Config& cfg, const std::set<std::string>& sections) {
  for (const auto& s : sections)
    if (std::find(section_names().begin(), section_names().end(), s) == section_names().end())
      throw ModuleError("cli", kExitInput, "unknown section '" + s + "'");
  if (cfg.flags.algebra && !cfg.flags.cutoff) throw ModuleError("cli", kExitInput, "--algebra needs --cutoff N");

  AnalyzeResult out;
  Pipeline pl{cfg, out};
  json& r = out.report;
  r["version"] = MIRRORCONE_VERSION;
  r["input"] = config_to_json(cfg);

  // toricdata
  auto vt = stage("toricdata", [&] { return validate(cfg.input); });
  stage("toricdata", [&] {
    if (cfg.input.lambda.kind == LambdaSpec::Kind::Map) check_keys(vt, cfg.input.lambda.values, "lambda");
    auto nef = check_nef_partition(vt);
    json n{{"holds", nef.holds}};
    if (!nef.holds) n["witness"] = {{"block", nef.block + 1}, {"m", intvec_json(nef.m)}, {"pairing", rat_string(nef.pairing)}};
    auto emb = check_embeddedness(vt);
    auto nbc = check_no_bc(vt);
    auto subset_verdict = [](const SubsetVerdict& v) {
      json j{{"holds", v.holds}, {"witnesses", subsets_json(v.witnesses)}};
      if (!v.witnesses.empty()) j["witness"] = subset_json(v.witnesses.front());
      return j;
    };
    r["conditions"] = {{"nef_partition", n}, {"embeddedness", subset_verdict(emb)}, {"no_bc", subset_verdict(nbc)}};

    auto g = symmetry_groups(vt);
    r["groups"] = {{"G", group_json(g.G)}, {"G_star", group_json(g.G_star)}, {"Gamma", group_json(g.Gamma)}};
    r["xi"] = {{"xi_count", vt.Xi.size()}, {"xi0_count", vt.Xi0.size()}, {"xi", keys_json(vt.Xi)}, {"xi0", keys_json(vt.Xi0)}};
    return 0;
  });

  // grading
  auto gd = stage("grading", [&] { return build_grading_data(vt, cfg.input.v); });
  stage("grading", [&] {
    bool square = check_commutative_square(*gd, vt);
    auto coker = coker_H(*gd, vt);
    bool inj = p_injective_mod_Z(*gd, vt);
    r["grading"] = {{"volume", intvec_json(gd->volume)}, {"square_commutes", square}, {"coker_H", group_json(coker)},
                    {"p_injective_mod_Z", inj}};
    if (!square) pl.fail_check("grading", "commutative square fails");
    if (!coker.trivial()) pl.fail_check("grading", "coker_H is not trivial");
    if (!inj) pl.fail_check("grading", "p is not injective modulo Z");
    return 0;
  });

  // bside
  stage("bside", [&] {
    check_keys(vt, cfg.input.b_valuations, "b_valuations");
    auto w = build_superpotential(vt, cfg.input.b_valuations);
    auto k = build_koszul_mf(w);
    bool sq = check_factorization(k, w);
    bool hom = check_delta_degree(k, w, *gd);
    bool flips = check_wflips(vt, w, gd->volume);
    auto dual = dualize_mf(k, w, vt, *gd, gd->volume);
    r["bside"] = {{"terms", w.terms.size()},
                  {"delta_squared_is_W", sq},
                  {"delta_homogeneous", hom},
                  {"epsilon_flips_W", flips},
                  {"dual",
                   {{"matches_closed_form", dual.pulled_back_matches_closed_form},
                    {"comparison_intertwines", dual.intertwines},
                    {"iso_degree", int_json(dual.iso_degree)}}}};
    if (!sq) pl.fail_check("bside", "delta^2 != W");
    if (!hom) pl.fail_check("bside", "delta is not homogeneous of degree (1, 0)");
    if (!flips) pl.fail_check("bside", "epsilon does not flip W");
    if (!dual.pulled_back_matches_closed_form) pl.fail_check("bside", "pulled-back dual differs from the closed form");
    if (!dual.intertwines) pl.fail_check("bside", "comparison map does not intertwine");
    return 0;
  });

  // fans
  if (cfg.input.lambda.kind != LambdaSpec::Kind::None) {
    stage("fans", [&] {
      auto lambda = resolve_lambda(vt, cfg.input.lambda);
      auto pc = project_config(vt);
      auto weights = config_weights(pc, lambda);
      if (cfg.flags.perturb) {
        weights = perturbed(pc, weights, *cfg.flags.perturb);
        for (std::size_t k = 1; k < weights.size(); ++k) lambda[*pc.points[k].source] = weights[k];
      }
      auto sub = regular_subdivision(pc, weights);
      auto rep = check_mpcp(sub, pc);
      check_mpcs(rep, sub, pc, vt);
      json failures = json::array();
      for (const auto& f : rep.failures) failures.push_back({{"cell", f.cell}, {"reason", f.reason}});
      auto cert = certify_isolated_singularity(vt, lambda);
      json chain = json::array();
      for (const auto& l : cert.chain) chain.push_back({{"name", l.name}, {"holds", l.holds}, {"detail", l.detail}});
      json c{{"certified", cert.certified}, {"chain", chain}};
      if (cert.failing_link) c["failing_link"] = cert.chain[*cert.failing_link].name;
      json s{{"dim", pc.dim},
             {"points", pc.points.size()},
             {"cells", sub.cells.size()},
             {"is_triangulation", rep.is_triangulation},
             {"refines_product_fan", rep.refines_product_fan},
             {"rays_are_xi0", rep.rays_are_xi0},
             {"mpcp", rep.mpcp},
             {"mpcs", rep.mpcs},
             {"failures", failures},
             {"certificate", c}};
      if (cfg.flags.perturb) s["perturb_seed"] = *cfg.flags.perturb;
      r["subdivision"] = s;
      if (rep.mpcp && !cert.certified) pl.fail_check("fans", "MPCP holds but the certificate chain fails");
      if (vt.n - vt.r <= 4 && rep.mpcs != rep.mpcp) pl.fail_check("fans", "mpcs differs from mpcp");
      return 0;
    });
  }

  // koszulalg
  if (cfg.flags.algebra) {
    stage("koszulalg", [&] {
      const std::size_t cutoff = *cfg.flags.cutoff;
      auto dims = tensor_j_dims(vt, cutoff);
      json gdims = json::array();
      for (const auto& [x, d] : dims)
        if (d > 0) {
          json m = json::array();
          for (auto v : x.m) m.push_back(v);
          gdims.push_back({{"j", x.j}, {"m", m}, {"dim", d}});
        }
      json a{{"cutoff", cutoff}, {"graded_dims", gdims}};

      BlockSizes sizes;
      bool consecutive = true;
      std::size_t at = 0;
      for (const auto& b : vt.blocks) {
        sizes.push_back(b.size());
        for (auto i : b) consecutive = consecutive && i == at++;
      }
      if (consecutive && vt.n <= 6) {
        bool agree = koszul_cohomology_dims(sizes, cutoff) == dims;
        bool sq = check_iota_squares_zero(sizes, cutoff);
        a["koszul_route_agrees"] = agree;
        a["iota_squares_zero"] = sq;
        if (!agree) pl.fail_check("koszulalg", "J dims differ from koszul cohomology dims");
        if (!sq) pl.fail_check("koszulalg", "iota_dW0 does not square to zero");
      }

      auto def = enumerate_deformation_classes(vt, gd->volume);
      a["deformations"] = {{"surviving", def.surviving.size()},
                           {"killed_by_sign", def.killed_by_sign},
                           {"killed_in_J", def.killed_in_j},
                           {"first_order_nonzero", def.first_order_nonzero},
                           {"classes", keys_json(def.surviving)}};
      if (!def.first_order_nonzero) pl.fail_check("koszulalg", "a first-order class vanishes in J");

      auto curv = enumerate_curvature_candidates(vt);
      bool match = curv == check_no_bc(vt).witnesses;
      a["curvature_candidates"] = subsets_json(curv);
      a["matches_no_bc"] = match;
      if (!match) pl.fail_check("koszulalg", "curvature candidates differ from the no-bc witnesses");
      r["algebra"] = a;
      return 0;
    });
  }

  if (!sections.empty()) {
    json filtered = json::object();
    for (const auto& s : sections)
      if (r.contains(s)) filtered[s] = r[s];
    r = filtered;
  }
  return out;
}

std::string render(const json& report) { return report.dump(2) + "\n"; }

}  // namespace mirrorcone
