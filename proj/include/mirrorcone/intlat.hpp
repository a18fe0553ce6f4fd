#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mirrorcone {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

class LatticeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense integer matrix, row-major.
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Int> entries;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}

  static IntMatrix from_rows(const std::vector<IntVec>& rs, std::size_t cols);
  static IntMatrix identity(std::size_t n);

  Int& operator()(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  const Int& operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

  IntVec row(std::size_t r) const;
  std::vector<IntVec> row_list() const;
  IntMatrix transpose() const;

  bool operator==(const IntMatrix& o) const = default;
};

/// A sublattice of Z^n stored by its Hermite normal form basis.
///
/// Rows are basis vectors. Row i has its last nonzero entry (the pivot)
/// at column pivot(i), pivots strictly increase, pivots are positive and
/// every entry in a pivot column below the pivot lies in [0, pivot).
struct Sublattice {
  std::size_t ambient_rank = 0;
  IntMatrix basis;

  std::size_t rank() const { return basis.rows; }
  bool full_rank() const { return basis.rows == ambient_rank; }
  std::size_t pivot(std::size_t i) const;
  /// Index in Z^n; only defined for full-rank lattices.
  Int index() const;

  bool operator==(const Sublattice& o) const = default;
};

struct FiniteAbelianGroup {
  std::vector<Int> invariant_factors;  // each >= 2, each divides the next

  bool trivial() const { return invariant_factors.empty(); }
  Int order() const;
  std::string to_string() const;

  bool operator==(const FiniteAbelianGroup& o) const = default;
};

struct RationalLatticeBasis {
  std::vector<RatVec> basis;
};

struct Congruence {
  IntVec c;
  Int modulus;
};

Sublattice hnf_canonicalize(const IntMatrix& generators);
Sublattice hnf_canonicalize(const std::vector<IntVec>& generators, std::size_t ambient_rank);
Sublattice sublattice_from_congruences(std::size_t ambient_rank,
                                       const std::vector<Congruence>& congruences);
bool contains(const Sublattice& lat, const IntVec& v);
FiniteAbelianGroup quotient_group(std::size_t ambient_rank, const Sublattice& lat);
RationalLatticeBasis dual_lattice(const Sublattice& lat);
/// Dual of a full-rank lattice given by a rational basis.
RationalLatticeBasis dual_lattice(const RationalLatticeBasis& lat);

/// Diagonal of the Smith normal form: nonzero invariants in divisibility
/// order, units included.
std::vector<Int> smith_diagonal(const IntMatrix& a);
/// Z^cols modulo the row span of `relations`. Throws if the quotient is infinite.
FiniteAbelianGroup cokernel(const IntMatrix& relations);
/// Number of free generators of Z^cols modulo the row span.
std::size_t cokernel_free_rank(const IntMatrix& relations);

/// Integer left kernel: a basis of {x in Z^rows : x * a = 0}, in HNF.
Sublattice integer_left_kernel(const IntMatrix& a);

// Exact rational helpers.
std::size_t rational_rank(std::vector<RatVec> rows);
/// Solves x * a = b for a rational row vector x; false if inconsistent.
bool rational_solve_left(const std::vector<RatVec>& a, const RatVec& b, RatVec& x);
std::vector<RatVec> rational_inverse(const std::vector<RatVec>& a);
/// Basis of {x : r . x = 0 for every row r}, vectors of length `cols`.
std::vector<RatVec> rational_nullspace(std::vector<RatVec> rows, std::size_t cols);
Rat rational_det(std::vector<RatVec> a);

Int dot(const IntVec& a, const IntVec& b);
Rat dot(const RatVec& a, const IntVec& b);
RatVec to_rat(const IntVec& v);
Int lcm_of(const std::vector<Int>& xs);

std::string to_string(const Rat& q);  // "num/den", denominator always shown

}  // namespace mirrorcone
