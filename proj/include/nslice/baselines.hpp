#pragma once

#include "nslice/formulations.hpp"

namespace nslice {

enum class BaselineStatus { Feasible, InfeasibleOrFailed };

struct BaselineResult {
  BaselineStatus status = BaselineStatus::InfeasibleOrFailed;
  double objective = 0.0;
  Placement placement;
  std::vector<int> activated;
  std::vector<FlowAssignment> flows;
  double time_ms = 0.0;
  std::string note;  // why a run failed, when it did

  Solution to_solution() const;
};

/// Exact reference: the full mixed-binary model handed to branch and bound.
/// A Feasible result carries the true optimum.
BaselineResult solve_direct(const InstanceIndex& idx,
                            const BranchBoundConfig& config = {});

/// One-shot rounding: solve the LP relaxation of the full model, host each
/// stage at its largest-valued cloud (ties to the lowest node id), then keep
/// the placement only if it respects compute capacity and routes.
BaselineResult solve_lp_one_shot_rounding(const InstanceIndex& idx,
                                          const SimplexConfig& config = {});

/// Dynamic rounding: repeatedly solve the LP relaxation, permanently fix
/// naturally-integral stages, then the placement variable closest to one;
/// stop when everything is fixed or the restricted relaxation goes
/// infeasible. The final placement faces the same capacity and routing check.
BaselineResult solve_lp_dynamic_rounding(const InstanceIndex& idx,
                                         const SimplexConfig& config = {});

const char* to_string(BaselineStatus status);

}  // namespace nslice
