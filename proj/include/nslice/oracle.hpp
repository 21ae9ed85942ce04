#pragma once

#include <stdexcept>

#include "nslice/instance.hpp"
#include "nslice/simplex.hpp"
#include "nslice/solution.hpp"

namespace nslice {

class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleConfig {
  // Upper bound on |clouds|^(total stages), the enumeration size.
  double guard = 1e6;
  SimplexConfig lp;
};

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  Placement placement;
};

/// Ground truth by exhaustive enumeration: every placement of stages onto
/// processable cloud nodes is checked against compute capacity and then
/// against a routing LP whose constraints are emitted here from first
/// principles (no shared model-building code), and the cheapest routable
/// placement wins. Throws GuardExceeded when the enumeration would exceed
/// the guard.
OracleResult brute_force_ns(const InstanceIndex& idx,
                            const OracleConfig& config = {});
/// Single-threaded reference with identical tie-breaking.
OracleResult brute_force_ns_serial(const InstanceIndex& idx,
                                   const OracleConfig& config = {});

/// Enumeration helpers shared with tests: all placements satisfying the
/// unique-hosting constraint over processable nodes, in lexicographic order.
std::vector<Placement> all_placements(const InstanceIndex& idx,
                                      double guard = 1e6);

/// Independent routability test for one placement (first-principles rows).
bool oracle_tr_feasible(const InstanceIndex& idx, const Placement& placement,
                        const SimplexConfig& config = {});

}  // namespace nslice
