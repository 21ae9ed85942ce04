#pragma once

#include <iosfwd>
#include <optional>

#include "nslice/formulations.hpp"

namespace nslice {

constexpr long kUnlimitedIterations = 1000000000L;

struct CbdConfig {
  long iter_max = kUnlimitedIterations;
  FpVariant variant = FpVariant::FP_II;
  double time_limit_sec = 0.0;  // 0 = no limit
  BranchBoundConfig milp;
  SimplexConfig lp;

  void check() const;  // iter_max >= 1
};

enum class CbdStatus { Optimal, Infeasible, IterLimit, TimeLimit };

const char* to_string(CbdStatus status);

struct IterationRecord {
  int iteration = 0;  // 1-based
  bool master_feasible = false;
  double master_objective = 0.0;
  long master_nodes = 0;
  Placement placement;      // defined when the master was feasible
  bool tr_feasible = false;
  int cut_id = -1;          // index into CbdResult::cuts, -1 when none
  int cut_nnz = 0;
  double cum_time_ms = 0.0;
};

struct CbdResult {
  CbdStatus status = CbdStatus::Infeasible;
  double objective = 0.0;
  Placement placement;
  std::vector<int> activated;
  std::vector<FlowAssignment> flows;
  std::vector<IterationRecord> trace;
  std::vector<BendersCut> cuts;
  double total_time_ms = 0.0;

  int iterations() const { return static_cast<int>(trace.size()); }
  Solution to_solution() const;
};

/// Master/subproblem loop: solve the placement master with the accumulated
/// cut pool, test routability of its solution, and either stop (optimal, or
/// master infeasible = problem infeasible) or add the feedback cut implied
/// by the routing system's infeasibility certificate and repeat. Cuts only
/// accumulate, so the master objective is nondecreasing and, because every
/// cut removes at least one binary point, the loop is finite even without an
/// iteration budget. Throws CutError on numerical cut-generation breakdown.
CbdResult solve_cbd(const InstanceIndex& idx, const CbdConfig& config = {});

/// Fraction of the master-to-optimum gap closed by each strengthened master:
/// (v(variant) - v(FP)) / (v(NS) - v(FP)). Undefined (nullopt) when the
/// problem is unroutable or the denominator is below tolerance.
struct GapImprovement {
  std::optional<double> fp_i;
  std::optional<double> fp_ii;
};
GapImprovement gap_improvement(const InstanceIndex& idx,
                               const CbdConfig& config = {});

/// Columns: iteration,master_obj,tr_status,cut_nnz,cum_time_ms
void write_trace_csv(std::ostream& out, const CbdResult& result);

}  // namespace nslice
