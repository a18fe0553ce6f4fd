#pragma once

#include <map>
#include <random>

#include "mirrorcone/fans.hpp"

namespace testutil {

using namespace mirrorcone;

/// 1 + |pi(p)|^2 / 1000, then a tiny seeded tie-break. Strictly convex on
/// the configuration, so every point of pi(Xi0) becomes a ray.
inline std::map<IntVec, Rat> convex_lambda(const ValidatedToricData& vt, unsigned long seed = 1) {
  auto cfg = project_config(vt);
  std::vector<Rat> w(cfg.points.size(), Rat(0));
  for (std::size_t k = 1; k < w.size(); ++k) {
    Int nn = 0;
    for (const auto& c : cfg.points[k].coords) nn += c * c;
    w[k] = Rat(1) + Rat(nn) / 1000;
  }
  w = perturb_weights(w, seed);
  std::map<IntVec, Rat> out;
  for (std::size_t k = 1; k < w.size(); ++k) out[*cfg.points[k].source] = w[k];
  return out;
}

/// Random v with block sums |I_j| - 1.
inline IntVec random_volume(const ValidatedToricData& vt, std::mt19937& rng) {
  std::uniform_int_distribution<long> c(-3, 3);
  IntVec v(vt.n, 0);
  for (const auto& blk : vt.blocks) {
    Int s = 0;
    for (std::size_t k = 0; k + 1 < blk.size(); ++k) {
      v[blk[k]] = c(rng);
      s += v[blk[k]];
    }
    v[blk.back()] = Int(blk.size() - 1) - s;
  }
  return v;
}

}  // namespace testutil
