#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mirrorcone/intlat.hpp"
#include "mirrorcone/toricdata.hpp"

namespace mirrorcone {

class FanError : public std::runtime_error {
 public:
  enum class Kind { DegenerateConfig, BadWeights, CellLiftFailure };
  FanError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

struct ConfigPoint {
  std::string id;       // "origin" or the exponent key of p
  IntVec coords;        // pi(p)
  IntVec lift;          // canonical lift: per-block minimum subtracted
  std::optional<IntVec> source;  // p in Xi0; empty for the origin
};

/// pi(Xi0) together with the origin, which is always point 0.
struct ProjectedConfig {
  std::size_t dim = 0;
  std::vector<ConfigPoint> points;
  std::vector<Block> blocks;  // of I
  std::vector<std::vector<std::size_t>> coord_index;  // per block: the indices kept as coordinates
};

/// Coordinates are m_i - m_last for each non-last index i of a block.
ProjectedConfig project_config(const ValidatedToricData& vt);
IntVec project(const ProjectedConfig& cfg, const IntVec& m);

/// h(x) = a . x + b.
struct AffineFunctional {
  RatVec a;
  Rat b;
  Rat operator()(const IntVec& x) const;
};

struct Subdivision {
  std::vector<std::vector<std::size_t>> cells;  // maximal cells, sorted point indices, sorted
  std::vector<AffineFunctional> supports;
  std::vector<Rat> weights;  // indexed like cfg.points, origin first
};

/// Weights aligned with cfg.points (origin gets 0) from a per-monomial map.
std::vector<Rat> config_weights(const ProjectedConfig& cfg, const std::map<IntVec, Rat>& lambda);

/// Lower faces of {(x_k, w_k)} found by pivoting across ridges.
Subdivision regular_subdivision(const ProjectedConfig& cfg, const std::vector<Rat>& weights);

/// Facets of conv of the given points (assumed full-dimensional), as
/// (equality set, outward functional g with g <= 0 on the points).
struct CellFacet {
  std::vector<std::size_t> points;
  AffineFunctional outward;
};
std::vector<CellFacet> cell_facets(const ProjectedConfig& cfg, const std::vector<std::size_t>& cell);

struct CellFailure {
  std::size_t cell;
  std::string reason;
};

struct ConditionReport {
  bool mpcp = false;
  bool mpcs = false;
  bool is_triangulation = false;
  bool refines_product_fan = false;
  bool rays_are_xi0 = false;
  std::vector<CellFailure> failures;
};

ConditionReport check_mpcp(const Subdivision& sub, const ProjectedConfig& cfg);
/// Fills mpcs: mpcp and every boundary-relevant cone unimodular for M.
void check_mpcs(ConditionReport& rep, const Subdivision& sub, const ProjectedConfig& cfg,
                const ValidatedToricData& vt);

struct LiftedCell {
  std::vector<IntVec> vertices;  // C-bar
  bool simplex = false;
  bool covers = false;  // every Xi point over the cell lies in conv(C-bar)
  std::optional<IntVec> uncovered;
};

struct LiftedSubdivision {
  std::vector<LiftedCell> cells;
};

/// Throws CellLiftFailure on the first failing cell.
LiftedSubdivision lift_subdivision(const Subdivision& sub, const ProjectedConfig& cfg, const ValidatedToricData& vt);

struct CertificateLink {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct Certificate {
  bool certified = false;
  std::vector<CertificateLink> chain;  // stops at the first failing link
  std::optional<std::size_t> failing_link;
};

Certificate certify_isolated_singularity(const ValidatedToricData& vt, const std::map<IntVec, Rat>& lambda);

/// Deterministic small perturbation of the weights, scaled below the
/// smallest nonzero gap. Never applied unless asked for.
std::vector<Rat> perturb_weights(const std::vector<Rat>& weights, unsigned long seed);

}  // namespace mirrorcone
