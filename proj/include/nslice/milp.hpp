#pragma once

#include <utility>
#include <vector>

#include "nslice/simplex.hpp"

namespace nslice {

/// A linear program plus the variable ids constrained to {0,1}.
struct MixedBinaryProgram {
  LinearProgram lp;
  std::vector<int> binaries;

  /// Throws when a binary id is unknown or its bounds are not within [0,1].
  void check_well_formed() const;
};

struct BranchBoundConfig {
  SimplexConfig lp;
  double tol_int = 1e-6;      // integrality tolerance on binaries
  double tol_obj_rel = 1e-9;  // relative optimality gap for termination
  long node_limit = 1000000000L;
};

enum class MilpStatus { Optimal, Infeasible, NodeLimit };

struct MilpOutcome {
  MilpStatus status = MilpStatus::Infeasible;
  bool has_incumbent = false;
  double objective = 0.0;
  std::vector<double> x;
  long nodes = 0;
  double bound_gap = 0.0;  // objective minus proven lower bound
  // (nodes processed, global lower bound) recorded at improvements.
  std::vector<std::pair<long, double>> bound_history;
};

/// Best-bound branch and bound. Branching picks the most fractional binary
/// (ties by lowest variable id) and explores the zero branch first; node ids
/// make all tie-breaking deterministic. Every node LP is solved from scratch.
MilpOutcome solve_milp(const MixedBinaryProgram& p,
                       const BranchBoundConfig& config = {});

/// Solves only the LP relaxation (binaries already carry [0,1] bounds).
/// The optimal value is a valid lower bound on the MILP optimum.
LpOutcome root_relaxation_value(const MixedBinaryProgram& p,
                                const SimplexConfig& config = {});

const char* to_string(MilpStatus status);

}  // namespace nslice
