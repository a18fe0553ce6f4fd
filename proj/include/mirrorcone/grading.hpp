#pragma once

#include <memory>
#include <optional>
#include <string>

#include "mirrorcone/intlat.hpp"
#include "mirrorcone/toricdata.hpp"

namespace mirrorcone {

/// Z (+) Z^rank modulo the row span of `relations` (rows of length 1 + rank).
struct GradingDatum {
  std::string name;
  std::size_t rank = 0;
  IntMatrix relations;
  Sublattice relation_lattice;  // HNF of the relation rows
  /// When set, degrees of this datum only use m-parts from this lattice.
  std::optional<Sublattice> m_domain;

  static GradingDatum make(std::string name, std::size_t rank, const std::vector<IntVec>& relations);
  /// Every relator has even first coordinate, so k mod 2 is well defined.
  bool sign_well_defined() const;
};

struct GDeg {
  const GradingDatum* datum = nullptr;
  Int j;
  IntVec m;

  IntVec flat() const;  // (j, m...)
  GDeg operator+(const GDeg& o) const;
  GDeg operator-(const GDeg& o) const;
  GDeg scaled(const Int& k) const;
};

GDeg make_deg(const GradingDatum& g, const Int& j, IntVec m);
/// True iff a - b lies in the relation lattice.
bool deg_equal(const GDeg& a, const GDeg& b);
/// The k with (k, 0) ~ x, if x lies in the image of Z.
std::optional<Int> z_part(const GDeg& x);

/// (j, m) -> (j + <c, m>, m * A).
struct GradingMorphism {
  std::string name;
  const GradingDatum* source = nullptr;
  const GradingDatum* target = nullptr;
  RatVec j_from_m;  // c; the image j must be integral on the source's m-domain
  IntMatrix m_map;  // A, source.rank x target.rank

  GDeg apply(const GDeg& x) const;
  /// Every source relator maps to zero in the target.
  bool well_defined() const;
};

struct GradingData {
  GradingDatum Z, G, G_tilde, G_Delta, G_MF;
  GradingMorphism p, q, r, s, t, u, v;
  IntVec volume;  // the vector v
};

IntVec default_volume_vector(const ValidatedToricData& vt);

/// Built in place: morphisms point into the returned object, so it is
/// handed out by unique pointer to keep addresses stable.
std::unique_ptr<GradingData> build_grading_data(const ValidatedToricData& vt, std::optional<IntVec> v = std::nullopt);

// Degrees of ring generators.
GDeg deg_z_tilde(const GradingData& gd, std::size_t i);   // (2, -e_i)
GDeg deg_z_delta(const GradingData& gd, std::size_t i);   // (0, e_i)
GDeg deg_theta(const GradingData& gd, std::size_t i);     // (-1, e_i)
GDeg deg_phi(const GradingData& gd, std::size_t i);       // (1, -e_i)
GDeg deg_r_p(const GradingData& gd, const IntVec& p);     // (0, p) in G
GDeg deg_monomial_tilde(const GradingData& gd, const IntVec& a);

/// s(q(x)) ~ r(p(x)) for x in a spanning set of G: (1,0) and (0, m) for the M_bar basis.
bool check_commutative_square(const GradingData& gd, const ValidatedToricData& vt);
bool square_holds_at(const GradingData& gd, const Int& k, const IntVec& m);

/// coker(G/Z -> ker(G_tilde/Z -> G_Delta/Z)).
FiniteAbelianGroup coker_H(const GradingData& gd, const ValidatedToricData& vt);
/// p restricted to G/Z has trivial kernel.
bool p_injective_mod_Z(const GradingData& gd, const ValidatedToricData& vt);

}  // namespace mirrorcone
