#include "mirrorcone/fixtures.hpp"

#include <stdexcept>

namespace mirrorcone {

namespace {

IntVec iv(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

ToricInput make(std::vector<Block> blocks, IntVec d, std::vector<Congruence> congruences) {
  ToricInput in;
  in.blocks = std::move(blocks);
  in.d = std::move(d);
  in.congruences = std::move(congruences);
  in.lambda.kind = LambdaSpec::Kind::Uniform;
  in.lambda.uniform = 1;
  return in;
}

}  // namespace

std::vector<std::string> fixture_names() { return {"elliptic", "quartic", "cubic-fourfold", "z-manifold"}; }

ToricInput fixture(const std::string& name) {
  if (name == "elliptic") return make({{0, 1, 2}}, iv({3, 3, 3}), {{iv({1, 1, 1}), 3}});
  if (name == "quartic") return make({{0, 1, 2, 3}}, iv({4, 4, 4, 4}), {{iv({1, 1, 1, 1}), 4}});
  if (name == "cubic-fourfold")
    return make({{0, 1, 2}, {3, 4, 5}}, iv({3, 3, 3, 3, 3, 3}), {{iv({1, 1, 1, 1, 1, 1}), 3}});
  if (name == "z-manifold")
    return make({{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}, iv({3, 3, 3, 3, 3, 3, 3, 3, 3}),
                {{iv({1, 1, 1, -1, -1, -1, 0, 0, 0}), 3}, {iv({0, 0, 0, 1, 1, 1, -1, -1, -1}), 3}});
  throw std::out_of_range("unknown example '" + name + "'");
}

}  // namespace mirrorcone
