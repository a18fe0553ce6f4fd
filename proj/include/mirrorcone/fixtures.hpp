#pragma once

#include <string>
#include <vector>

#include "mirrorcone/toricdata.hpp"

namespace mirrorcone {

/// Built-in example inputs: elliptic, quartic, cubic-fourfold, z-manifold.
std::vector<std::string> fixture_names();
/// Throws std::out_of_range for unknown names.
ToricInput fixture(const std::string& name);

}  // namespace mirrorcone
