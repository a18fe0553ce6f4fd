#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mirrorcone/fixtures.hpp"
#include "mirrorcone/grading.hpp"
#include "mirrorcone/koszulalg.hpp"
#include "oracles.hpp"

using namespace mirrorcone;

namespace {

IntVec iv(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

ExtPolyElement mono(ExtPolyElement::Universe u, const BlockSizes& sizes, std::vector<long> z, std::uint32_t odd) {
  ExtPolyElement e{u, sizes, {}};
  e.terms[ExtMono{std::move(z), odd}] = 1;
  return e;
}

}  // namespace

TEST_CASE("canonical classes") {
  auto x = canonical_class({3}, 5, {-1, 2, 0});
  CHECK(x.m == std::vector<long>{0, 3, 1});
  CHECK(x.j == 5 - 4);  // shift by e_I adds (2(1 - 3), e_I)
  CHECK(canonical_class({2, 2}, 0, {1, 1, -2, 0}) == canonical_class({2, 2}, -2, {2, 2, -2, 0}));
}

TEST_CASE("koszul cohomology against the brute-force complex") {
  for (auto [n, cutoff] : {std::pair<std::size_t, std::size_t>{3, 5}, {4, 4}}) {
    auto lib = koszul_cohomology_dims({n}, cutoff);
    long bound = 2 * static_cast<long>(cutoff + n) + 2;
    auto small = oracle::koszul_single_block(n, bound);
    auto big = oracle::koszul_single_block(n, bound + static_cast<long>(n) + 2);
    for (const auto& [x, d] : lib) {
      auto key = std::make_pair(x.j, x.m);
      REQUIRE(big.count(key));
      CHECK(small[key] == big[key]);
      CHECK(static_cast<long>(d) == big[key]);
    }
  }
}

TEST_CASE("low z-degree of J for a three-variable block") {
  auto dims = j_algebra_dims({3}, 3);
  CHECK(dims.at(DegClass{0, {0, 0, 0}}) == 1);
  CHECK(dims.at(DegClass{1, {0, 0, 0}}) == 2);
  CHECK(dims.at(DegClass{2, {0, 0, 0}}) == 0);
  CHECK(dims.at(DegClass{3, {0, 0, 0}}) == 0);
}

TEST_CASE("J and koszul cohomology agree") {
  for (std::size_t n : {3u, 4u, 5u}) {
    auto a = j_algebra_dims({n}, n + 2);
    auto b = koszul_cohomology_dims({n}, n + 2);
    CHECK(a == b);
    std::size_t total = 0;
    for (const auto& [x, d] : a) total += d;
    CHECK(total > 0);
  }
  CHECK(j_algebra_dims({2, 2}, 5) == koszul_cohomology_dims({2, 2}, 5));
}

TEST_CASE("reported classes match for both routes") {
  auto a = j_algebra_dims({4}, 6);
  auto rc = reported_classes({4}, 6);
  REQUIRE(a.size() == rc.size());
  std::size_t i = 0;
  for (const auto& [x, d] : a) CHECK(x == rc[i++]);
}

TEST_CASE("contraction squares to zero and cycles come from f") {
  for (std::size_t n : {3u, 4u, 5u}) {
    CHECK(check_iota_squares_zero({n}, n + 2));
    CHECK(check_kernel_in_image_of_f({n}, n + 2));
  }
  CHECK(check_iota_squares_zero({3, 3}, 6));
  CHECK(check_kernel_in_image_of_f({2, 3}, 5));
}

TEST_CASE("f intertwines the block contraction with iota_dW0") {
  // iota_dW0 f(x) = f(-sum_b z^{e_{I_b}} iota_b x) on z^a u^S.
  const BlockSizes sizes{3, 2};
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> e(0, 2);
  for (int t = 0; t < 30; ++t) {
    std::vector<long> z(5);
    for (auto& x : z) x = e(rng);
    auto x = mono(ExtPolyElement::Universe::U, sizes, z, static_cast<std::uint32_t>(rng() % 32));
    auto lhs = iota_dw0(f_map(x));
    ExtPolyElement rhs{ExtPolyElement::Universe::Theta, sizes, {}};
    std::size_t start = 0;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
      auto ib = f_map(iota_block(x, b));
      for (const auto& [m, c] : ib.terms) {
        ExtMono mm = m;
        for (std::size_t k = 0; k < sizes[b]; ++k) mm.z[start + k] += 1;
        rhs.terms[mm] -= c;
      }
      start += sizes[b];
    }
    std::erase_if(rhs.terms, [](const auto& kv) { return kv.second == 0; });
    CHECK(lhs.terms == rhs.terms);
  }
}

TEST_CASE("vanishing in J") {
  const BlockSizes s{3};
  auto hb = h_basis(s);
  CHECK_FALSE(vanishes_in_j(mono(ExtPolyElement::Universe::U, s, {0, 0, 0}, 0)));
  CHECK_FALSE(vanishes_in_j(hb[0]));
  CHECK(vanishes_in_j(mono(ExtPolyElement::Universe::U, s, {1, 1, 0}, 0)));
  CHECK_FALSE(vanishes_in_j(mono(ExtPolyElement::Universe::U, s, {2, 0, 0}, 0)));
  CHECK(vanishes_in_j(mono(ExtPolyElement::Universe::U, s, {1, 0, 0}, 0)) == false);
  // h_0 h_1 is iota_{e_I}(u_0 u_1 u_2) up to sign.
  ExtPolyElement h01{ExtPolyElement::Universe::U, s, {}};
  h01.terms[ExtMono{{0, 0, 0}, 0b011}] = 1;
  h01.terms[ExtMono{{0, 0, 0}, 0b101}] = -1;
  h01.terms[ExtMono{{0, 0, 0}, 0b110}] = 1;
  CHECK(vanishes_in_j(h01));
  CHECK_THROWS(vanishes_in_j(mono(ExtPolyElement::Universe::U, s, {0, 0, 0}, 0b001)));
}

TEST_CASE("sign of the generator") {
  CHECK(sign_action(iv({0, 0, 0}), 0, iv({1, 1, 0})) == -1);
  CHECK(sign_action(iv({1, 1, 1}), 0, iv({1, 1, 0})) == 1);
  CHECK(sign_action(iv({1, 0, 0}), 2, iv({1, 1, 0})) == -1);
  // a -> -sign(a, h) is a character.
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> c(-3, 3);
  for (int t = 0; t < 100; ++t) {
    IntVec a(4), b(4), v(4), ab(4);
    for (std::size_t i = 0; i < 4; ++i) {
      a[i] = c(rng);
      b[i] = c(rng);
      v[i] = c(rng);
      ab[i] = a[i] + b[i];
    }
    std::size_t h1 = rng() % 3, h2 = rng() % 3;
    CHECK(-sign_action(ab, h1 + h2, v) == sign_action(a, h1, v) * sign_action(b, h2, v));
  }
}

TEST_CASE("deformation classes are the first-order ones") {
  const std::map<std::string, std::size_t> xi0{{"elliptic", 3}, {"quartic", 22}, {"cubic-fourfold", 24}, {"z-manifold", 36}};
  std::mt19937 rng(11);
  for (const auto& [name, count] : xi0) {
    auto vt = validate(fixture(name));
    std::vector<IntVec> vs{default_volume_vector(vt)};
    for (int t = 0; t < 2; ++t) vs.push_back(testutil::random_volume(vt, rng));
    for (const auto& v : vs) {
      auto rep = enumerate_deformation_classes(vt, v);
      CHECK(rep.surviving.size() == count);
      CHECK(rep.surviving == vt.Xi0);
      CHECK(rep.first_order_nonzero);
      std::size_t hs = 0;
      for (const auto& c : rep.candidates) {
        if (c.h_size == 2) {
          ++hs;
          CHECK(c.fate == DeformationCandidate::Fate::KilledBySign);
        } else if (!std::binary_search(vt.Xi0.begin(), vt.Xi0.end(), c.b)) {
          CHECK(c.fate != DeformationCandidate::Fate::Surviving);
        }
      }
      std::size_t hdim = vt.n - vt.r;
      CHECK(hs == hdim * (hdim - 1) / 2);
      CHECK(rep.killed_by_sign + rep.killed_in_j + rep.surviving.size() == rep.candidates.size());
    }
  }
}

TEST_CASE("curvature candidates match the no-bc witnesses") {
  for (const auto& name : fixture_names()) {
    auto vt = validate(fixture(name));
    CHECK(enumerate_curvature_candidates(vt) == check_no_bc(vt).witnesses);
  }
  CHECK(enumerate_curvature_candidates(validate(fixture("quartic"))).empty());
  auto cubic = enumerate_curvature_candidates(validate(fixture("cubic-fourfold")));
  CHECK(std::find(cubic.begin(), cubic.end(), Subset{0, 3, 4}) != cubic.end());
}

TEST_CASE("tensor product of block algebras") {
  auto vt = validate(fixture("cubic-fourfold"));
  CHECK(tensor_j_dims(vt, 6) == j_algebra_dims({3, 3}, 6));
  auto single = validate(fixture("quartic"));
  CHECK(tensor_j_dims(single, 5) == j_algebra_dims({4}, 5));
  auto z = tensor_j_dims(validate(fixture("z-manifold")), 9);
  CHECK(z.at(DegClass{0, std::vector<long>(9, 0)}) == 1);
  CHECK(z.at(DegClass{1, std::vector<long>(9, 0)}) == 6);
}

TEST_CASE("cutoff below the number of variables") {
  CHECK_THROWS_AS(j_algebra_dims({4}, 3), KoszulError);
  CHECK_THROWS_AS(koszul_cohomology_dims({2, 2}, 3), KoszulError);
}

TEST_CASE("cross-block cycles need not lie in im f") {
  const BlockSizes s{2, 2};
  ExtPolyElement c{ExtPolyElement::Universe::Theta, s, {}};
  c.terms[ExtMono{{0, 0, 0, 1}, 0b0001}] = 1;
  c.terms[ExtMono{{0, 1, 0, 0}, 0b0100}] = -1;
  CHECK(iota_dw0(c).zero());
  CHECK(check_kernel_in_image_of_f(s, 4));
}
