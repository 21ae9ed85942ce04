#pragma once

#include <cstdint>
#include <vector>

#include "nslice/instance.hpp"

namespace nslice {

/// Boolean directed-reachability matrix; reach(i,j) is true iff a directed
/// path i -> j exists. Every node reaches itself (path of length zero).
struct ReachabilityMatrix {
  int n = 0;
  std::vector<std::uint8_t> bits;  // row-major n*n

  bool at(int i, int j) const { return bits[static_cast<size_t>(i) * n + j]; }
};

/// Transitive closure by breadth-first search from every node,
/// O(|I| * (|I| + |L|)). Rows are filled in parallel when OpenMP is enabled.
ReachabilityMatrix transitive_closure(const InstanceIndex& idx);
/// Single-threaded reference; identical output by construction.
ReachabilityMatrix transitive_closure_serial(const InstanceIndex& idx);

/// The unreachability sets consumed by the connectivity-based master rows.
/// All sets contain cloud-node substrate indices in ascending order.
struct UnreachableSets {
  // Per service: cloud nodes with no path from the source.
  std::vector<std::vector<int>> from_source;
  // Per service: cloud nodes with no path to the destination.
  std::vector<std::vector<int>> to_destination;
  // Per cloud slot v0: cloud nodes v != v0 with no path v0 -> v.
  std::vector<std::vector<int>> from_cloud;
};

UnreachableSets unreachable_sets(const ReachabilityMatrix& reach,
                                 const InstanceIndex& idx);

}  // namespace nslice
