#include <doctest.h>

#include <random>

#include "mirrorcone/bside.hpp"
#include "mirrorcone/fixtures.hpp"
#include "helpers.hpp"

using namespace mirrorcone;

namespace {

IntVec iv(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// Dense oracle: substitute integers for z and the coefficient symbols and build
// delta as a 2^n x 2^n matrix from fermionic creation/annihilation matrices.
using Mat = std::vector<std::vector<Int>>;

Mat zero(std::size_t N) { return Mat(N, std::vector<Int>(N, 0)); }

Mat mul(const Mat& a, const Mat& b) {
  std::size_t N = a.size();
  Mat c = zero(N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < N; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Mat creation(std::size_t n, std::size_t i, bool create) {
  std::size_t N = std::size_t{1} << n;
  Mat m = zero(N);
  for (std::size_t s = 0; s < N; ++s) {
    bool has = s >> i & 1;
    if (has == create) continue;
    int before = 0;
    for (std::size_t k = 0; k < i; ++k) before += s >> k & 1;
    m[s ^ (std::size_t{1} << i)][s] = before % 2 ? -1 : 1;
  }
  return m;
}

Int eval(const Poly& p, const IntVec& z, const std::vector<Int>& b) {
  Int total = 0;
  for (const auto& [k, c] : p) {
    Int t = c;
    for (std::size_t i = 0; i < z.size(); ++i)
      for (Int e = 0; e < k.z[i]; ++e) t *= z[i];
    for (auto s : k.syms) t *= b[s];
    total += t;
  }
  return total;
}

Int eval_w(const Superpotential& w, const IntVec& z, const std::vector<Int>& b) {
  Int total = 0;
  for (std::size_t t = 0; t < w.terms.size(); ++t) {
    Int x = w.terms[t].sign;
    if (!w.terms[t].block) x *= b[t];
    for (std::size_t i = 0; i < z.size(); ++i)
      for (Int e = 0; e < w.terms[t].exp[i]; ++e) x *= z[i];
    total += x;
  }
  return total;
}


}  // namespace

TEST_CASE("superpotential layout") {
  auto vt = validate(fixture("quartic"));
  auto w = build_superpotential(vt);
  REQUIRE(w.terms.size() == 1 + 22);
  CHECK(w.terms[0].block);
  CHECK(w.terms[0].sign == -1);
  CHECK(w.terms[0].exp == iv({1, 1, 1, 1}));
  CHECK(w.terms[1].exp == iv({0, 0, 0, 4}));
  CHECK(w.terms[1].val == Rat(1));
  CHECK_THROWS_AS(build_superpotential(vt, {{iv({1, 1, 1, 1}), Rat(2)}}), ValidationError);
  auto w2 = build_superpotential(vt, {{iv({4, 0, 0, 0}), Rat(3, 2)}});
  CHECK(w2.terms.back().val == Rat(3, 2));
}

TEST_CASE("split recovers W") {
  auto vt = validate(fixture("elliptic"));
  auto w = build_superpotential(vt);
  auto split = split_superpotential(w);
  // -z1z2z3 goes to W_1 as -z2z3.
  CHECK(split[0].at(PolyKey{iv({0, 1, 1}), {}}) == -1);
  CHECK(split[2].size() == 1);  // only z3^3
  Poly sum;
  for (std::size_t i = 0; i < 3; ++i) {
    IntVec e(3, 0);
    e[i] = 1;
    sum = poly_add(sum, poly_mul(Poly{{PolyKey{e, {}}, Int(1)}}, split[i]));
  }
  CHECK(sum == w_as_poly(w));
}

TEST_CASE("delta squares to W against the dense oracle") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> c(-4, 4);
  for (const char* name : {"elliptic", "quartic", "cubic-fourfold"}) {
    CAPTURE(name);
    auto vt = validate(fixture(name));
    auto w = build_superpotential(vt);
    auto k = build_koszul_mf(w);
    CHECK(check_factorization(k, w));
    for (int trial = 0; trial < 3; ++trial) {
      IntVec z(vt.n);
      for (auto& x : z) x = c(rng);
      std::vector<Int> b(w.terms.size());
      for (auto& x : b) x = c(rng);
      std::size_t N = std::size_t{1} << vt.n;
      Mat d = zero(N);
      for (const auto& t : k.delta.terms) {
        Int coeff = eval(t.coeff, z, b);
        Mat op = creation(vt.n, t.index, t.wedge);
        for (std::size_t i = 0; i < N; ++i)
          for (std::size_t j = 0; j < N; ++j) d[i][j] += coeff * op[i][j];
      }
      Mat sq = mul(d, d);
      Int W = eval_w(w, z, b);
      bool ok = true;
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
          if (sq[i][j] != (i == j ? W : Int(0))) ok = false;
      CHECK(ok);
    }
  }
}

TEST_CASE("delta is homogeneous of degree (1, 0)") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    auto vt = validate(fixture(name));
    auto gd = build_grading_data(vt);
    auto w = build_superpotential(vt);
    CHECK(check_delta_degree(build_koszul_mf(w), w, *gd));
  }
}

TEST_CASE("epsilon flips W") {
  std::mt19937 rng(3);
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    auto vt = validate(fixture(name));
    auto w = build_superpotential(vt);
    CHECK(check_wflips(vt, w, default_volume_vector(vt)));
    for (int t = 0; t < 10; ++t) CHECK(check_wflips(vt, w, testutil::random_volume(vt, rng)));
    IntVec bad = default_volume_vector(vt);
    bad[0] += 1;
    CHECK_FALSE(check_wflips(vt, w, bad));
  }
  // Brute-force the flip on the quartic by evaluating W at signed points.
  auto vt = validate(fixture("quartic"));
  auto w = build_superpotential(vt);
  IntVec v = default_volume_vector(vt);
  std::vector<Int> b(w.terms.size());
  for (std::size_t t = 0; t < b.size(); ++t) b[t] = Int(t * 7 % 5 + 1);
  IntVec z = iv({2, -3, 5, 7});
  IntVec ez = z;
  std::vector<Int> eb = b;
  for (std::size_t i = 0; i < 4; ++i) ez[i] *= epsilon_var_sign(v, i);
  for (std::size_t t = 0; t < b.size(); ++t)
    if (!w.terms[t].block) eb[t] *= epsilon_coeff_sign(vt, v, w.terms[t].exp);
  CHECK(eval_w(w, ez, eb) == -eval_w(w, z, b));
}

TEST_CASE("dualization square on the fixtures") {
  std::mt19937 rng(5);
  // Z-part of the comparison map degree, equal to minus the complex dimension
  // of the complete intersection: 2r - n.
  const std::map<std::string, long> expected{
      {"elliptic", -1}, {"quartic", -2}, {"cubic-fourfold", -2}, {"z-manifold", -3}};
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    auto vt = validate(fixture(name));
    auto gd = build_grading_data(vt);
    auto w = build_superpotential(vt);
    auto k = build_koszul_mf(w);
    std::vector<IntVec> vs{default_volume_vector(vt)};
    if (vt.n <= 6)
      for (int t = 0; t < 3; ++t) vs.push_back(testutil::random_volume(vt, rng));
    for (const auto& v : vs) {
      auto res = dualize_mf(k, w, vt, *gd, v);
      CHECK(res.pulled_back_matches_closed_form);
      CHECK(res.intertwines);
      CHECK(res.unsigned_map_anticommutes);
      CHECK(res.iso_degree == expected.at(name));
    }
  }
}
