#include <doctest.h>

#include <random>

#include "mirrorcone/intlat.hpp"
#include "oracles.hpp"

using namespace mirrorcone;

namespace {

IntVec iv(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

std::vector<IntVec> to_int_rows(const std::vector<oracle::Vec>& rows) {
  std::vector<IntVec> out;
  for (const auto& r : rows) {
    IntVec v;
    for (long x : r) v.emplace_back(x);
    out.push_back(v);
  }
  return out;
}

Sublattice quartic_lattice() { return sublattice_from_congruences(4, {{iv({1, 1, 1, 1}), 4}}); }

Sublattice zmanifold_lattice() {
  return sublattice_from_congruences(9, {{iv({1, 1, 1, -1, -1, -1, 0, 0, 0}), 3},
                                         {iv({0, 0, 0, 1, 1, 1, -1, -1, -1}), 3}});
}

}  // namespace

TEST_CASE("identity is already canonical") {
  auto s = hnf_canonicalize(IntMatrix::identity(4));
  CHECK(s.basis == IntMatrix::identity(4));
  CHECK(s.index() == 1);
}

TEST_CASE("scaled axes plus diagonal: index agrees with coset count") {
  std::vector<oracle::Vec> gens = {{4, 0, 0, 0}, {0, 4, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 4}, {1, 1, 1, 1}};
  long expected = oracle::index_by_cosets(gens, 4, 4);
  CHECK(expected == 64);
  auto s = hnf_canonicalize(to_int_rows(gens), 4);
  CHECK(s.rank() == 4);
  CHECK(s.index() == expected);
}

TEST_CASE("HNF shape: lower triangular, positive pivots, reduced below") {
  auto s = hnf_canonicalize(to_int_rows({{4, 0, 0, 0}, {0, 4, 0, 0}, {0, 0, 4, 0}, {0, 0, 0, 4}, {1, 1, 1, 1}}), 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s.basis(i, i) > 0);
    for (std::size_t j = i + 1; j < 4; ++j) CHECK(s.basis(i, j) == 0);
    for (std::size_t k = i + 1; k < 4; ++k) {
      CHECK(s.basis(k, i) >= 0);
      CHECK(s.basis(k, i) < s.basis(i, i));
    }
  }
}

TEST_CASE("congruence kernels") {
  auto q = quartic_lattice();
  CHECK(q.index() == oracle::index_by_cosets({{4, 0, 0, 0}, {0, 4, 0, 0}, {0, 0, 4, 0}, {1, 1, 1, 1}, {1, -1, 0, 0}, {0, 1, -1, 0}, {0, 0, 1, -1}}, 4, 4));
  CHECK(q.index() == 4);
  auto c6 = sublattice_from_congruences(6, {{iv({1, 1, 1, 1, 1, 1}), 3}});
  CHECK(c6.index() == 3);
  CHECK(zmanifold_lattice().index() == 9);
}

TEST_CASE("membership in the quartic lattice") {
  auto q = quartic_lattice();
  CHECK(contains(q, iv({1, 1, 1, 1})));
  CHECK_FALSE(contains(q, iv({1, 0, 0, 0})));
  CHECK(contains(q, iv({1, -1, 0, 0})));
  CHECK_THROWS_AS(contains(q, iv({1, 1})), LatticeError);
}

TEST_CASE("quotient groups") {
  CHECK(quotient_group(4, quartic_lattice()).invariant_factors == std::vector<Int>{4});
  CHECK(quotient_group(3, hnf_canonicalize(IntMatrix::identity(3))).trivial());

  // Z^9 / M: the congruence map onto (Z/3)^2 is surjective (9 residues
  // reached from the unit vectors) and every class has order 3.
  std::vector<oracle::Vec> images;
  const long c1[9] = {1, 1, 1, -1, -1, -1, 0, 0, 0};
  const long c2[9] = {0, 0, 0, 1, 1, 1, -1, -1, -1};
  for (int i = 0; i < 9; ++i) images.push_back({oracle::mod(c1[i], 3), oracle::mod(c2[i], 3)});
  CHECK(oracle::subgroup_mod(images, 3, 2).size() == 9);
  CHECK(quotient_group(9, zmanifold_lattice()).invariant_factors == std::vector<Int>{3, 3});

  auto half = hnf_canonicalize(to_int_rows({{1, 0}}), 2);
  CHECK_THROWS_AS(quotient_group(2, half), LatticeError);
}

TEST_CASE("dual lattices") {
  auto id = dual_lattice(hnf_canonicalize(IntMatrix::identity(3)));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(id.basis[i][j] == (i == j ? 1 : 0));

  auto q = quartic_lattice();
  auto d = dual_lattice(q);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(dot(d.basis[i], q.basis.row(j)) == (i == j ? 1 : 0));
  // (1,1,1,1)/4 pairs integrally with every basis vector.
  RatVec ns(4, Rat(1, 4));
  for (std::size_t j = 0; j < 4; ++j) CHECK(dot(ns, q.basis.row(j)).get_den() == 1);
  RatVec coords;
  std::vector<RatVec> drows = d.basis;
  REQUIRE(rational_solve_left(drows, ns, coords));
  for (auto& c : coords) CHECK(c.get_den() == 1);
}

TEST_CASE("Smith diagonal is a divisibility chain") {
  IntMatrix m = IntMatrix::from_rows({iv({2, 4, 4}), iv({-6, 6, 12}), iv({10, -4, -16})}, 3);
  auto diag = smith_diagonal(m);
  REQUIRE(diag.size() == 3);
  CHECK(diag[0] == 2);
  CHECK(diag[1] == 6);
  CHECK(diag[2] == 12);
}

TEST_CASE("integer left kernel") {
  IntMatrix a = IntMatrix::from_rows({iv({1, 2}), iv({2, 4}), iv({3, 6})}, 2);
  auto k = integer_left_kernel(a);
  CHECK(k.rank() == 2);
  for (std::size_t r = 0; r < k.rank(); ++r) {
    auto x = k.basis.row(r);
    CHECK(x[0] * 1 + x[1] * 2 + x[2] * 3 == 0);
  }
}

TEST_CASE("property: HNF idempotence, membership, order and double dual") {
  std::mt19937 rng(20261019);
  std::uniform_int_distribution<long> ent(-5, 5);
  int checked = 0;
  while (checked < 60) {
    std::vector<oracle::Vec> m(3, oracle::Vec(3));
    for (auto& r : m)
      for (auto& x : r) x = ent(rng);
    long det = std::labs(oracle::det3(m));
    if (det == 0 || det > 40) continue;
    ++checked;
    auto s = hnf_canonicalize(to_int_rows(m), 3);
    CHECK(hnf_canonicalize(s.basis) == s);
    CHECK(s.index() == det);
    CHECK(quotient_group(3, s).order() == det);

    // Membership against brute-force cosets: L contains det*Z^3.
    auto sub = oracle::subgroup_mod(m, det, 3);
    std::uniform_int_distribution<long> coord(-2 * det, 2 * det);
    for (int t = 0; t < 30; ++t) {
      oracle::Vec v{coord(rng), coord(rng), coord(rng)};
      oracle::Vec r{oracle::mod(v[0], det), oracle::mod(v[1], det), oracle::mod(v[2], det)};
      CHECK(contains(s, to_int_rows({v})[0]) == (sub.count(r) == 1));
    }

    auto dd = dual_lattice(dual_lattice(s));
    std::vector<IntVec> rows;
    for (const auto& r : dd.basis) {
      IntVec v;
      for (const auto& x : r) {
        REQUIRE(x.get_den() == 1);
        v.push_back(x.get_num());
      }
      rows.push_back(v);
    }
    CHECK(hnf_canonicalize(rows, 3) == s);
  }
}
