#pragma once

#include <span>
#include <string>
#include <vector>

#include "ndsort/level.hpp"

namespace ndsort {

struct InvariantReport {
    bool ok = true;
    std::vector<std::string> violations;  // capped, human-readable

    void fail(std::string what);
};

/// Full structural sweep over a materialized level sequence:
///   - no empty level, consistent dimensions, unique ordinals
///   - every level is an antichain under strict domination
///   - every point of level i+1 has a strict dominator in level i
///   - per-coordinate views are coordinate-sorted permutations
///   - stored crowding equals a from-scratch recomputation
///     (1e-12 relative; infinities exact)
InvariantReport check_invariants(std::span<const Level> levels);

/// True iff the level partition equals the non-dominated sorting of the
/// union of all points, checked against the quadratic oracle.
bool partition_matches_oracle(std::span<const Level> levels);

}  // namespace ndsort
