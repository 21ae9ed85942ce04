#pragma once

#include "nslice/lp.hpp"

namespace nslice {

/// Tolerances and limits for the bounded revised simplex. Defaults follow
/// standard double-precision practice; everything is configurable.
struct SimplexConfig {
  double tol_feas = 1e-7;   // primal feasibility
  double tol_cert = 1e-6;   // minimum Farkas certificate gap
  double tol_dj = 1e-9;     // reduced-cost optimality threshold
  double tol_pivot = 1e-9;  // minimum accepted pivot magnitude
  long iter_limit = 500000;
  int bland_after = 64;     // consecutive degenerate steps before Bland's rule
};

/// Two-phase bounded revised simplex, minimization.
///
/// Pricing is largest-reduced-cost with ties broken by lowest variable id,
/// falling back to Bland's rule after a degeneracy stall, so runs are
/// deterministic for a fixed config. Infeasible problems come back with a
/// Farkas certificate extracted from the phase-one duals; the certificate is
/// re-verified against the model before the Infeasible status is reported,
/// and verification failures surface as Stalled rather than a wrong answer.
LpOutcome solve_lp(const LinearProgram& lp, const SimplexConfig& config = {});

}  // namespace nslice
