#pragma once

#include <set>
#include <string>
#include <utility>

#include "miohint/target.hpp"

namespace miohint {

using LineKey = std::pair<std::string, int>;  // (source_unit, 1-based line)

struct CoverageSnapshot {
  std::set<Target> covered_targets;
  std::set<LineKey> covered_lines;
};

enum class CoverageComparison { Cardinality, Containment };

// "Covers not fewer targets": with the default cardinality reading, true iff
// |new| >= |old|. The containment variant requires new ⊇ old.
inline bool coverage_not_fewer(const CoverageSnapshot& new_snap, const CoverageSnapshot& old_snap,
                               CoverageComparison cmp = CoverageComparison::Cardinality) {
  if (cmp == CoverageComparison::Cardinality)
    return new_snap.covered_targets.size() >= old_snap.covered_targets.size();
  for (const auto& t : old_snap.covered_targets)
    if (!new_snap.covered_targets.count(t)) return false;
  return true;
}

}  // namespace miohint
