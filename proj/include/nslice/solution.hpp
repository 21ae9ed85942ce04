#pragma once

#include <string>
#include <vector>

#include "nslice/instance.hpp"

namespace nslice {

/// placement[k][s-1] = substrate node hosting function s of service k.
using Placement = std::vector<std::vector<int>>;

/// Positive traffic of flow (service, flow_index) on a link.
/// Flow index 0 precedes the first function; index s leaves function s.
struct FlowAssignment {
  int link = -1;
  int service = -1;
  int flow = -1;
  double value = 0.0;
};

struct Solution {
  std::string status;  // "optimal", "feasible", "infeasible", ...
  double objective = 0.0;
  Placement placement;
  std::vector<int> activated;  // substrate node indices with y_v = 1
  std::vector<FlowAssignment> flows;
};

struct FeasibilityReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Recomputes every model constraint of the full problem from scratch:
/// one host per stage, hosts processable and activated, node compute loads,
/// link loads, per-flow conservation at every node, nonnegative flows, and
/// the reported objective. Intentionally shares no code with the model
/// builders.
FeasibilityReport check_ns_solution(const InstanceIndex& idx,
                                    const Solution& solution,
                                    double tol = 1e-6);

/// Objective of a placement with minimal activation: activation power of
/// every hosting node plus all placement costs.
double placement_objective(const InstanceIndex& idx,
                           const Placement& placement);

/// Nodes hosting at least one function, ascending.
std::vector<int> activated_nodes(const InstanceIndex& idx,
                                 const Placement& placement);

std::string solution_to_json(const InstanceIndex& idx, const Solution& s);
Solution solution_from_json(const InstanceIndex& idx, const std::string& text);
void save_solution(const InstanceIndex& idx, const Solution& s,
                   const std::string& path);
Solution load_solution(const InstanceIndex& idx, const std::string& path);

}  // namespace nslice
