#include "nslice/benders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace nslice {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<FlowAssignment> collect_flows(const InstanceIndex& idx,
                                          const TrModel& tr,
                                          const std::vector<double>& r) {
  std::vector<FlowAssignment> flows;
  for (int k = 0; k < idx.service_count(); ++k)
    for (int f = 0; f <= idx.chain_length(k); ++f)
      for (int l = 0; l < idx.link_count(); ++l) {
        const double v = r[tr.r_var(l, k, f)];
        if (v > 1e-12) flows.push_back({l, k, f, v});
      }
  return flows;
}

}  // namespace

void CbdConfig::check() const {
  if (iter_max < 1)
    throw std::invalid_argument("iteration budget must be >= 1");
}

const char* to_string(CbdStatus status) {
  switch (status) {
    case CbdStatus::Optimal:
      return "optimal";
    case CbdStatus::Infeasible:
      return "infeasible";
    case CbdStatus::IterLimit:
      return "iter-limit";
    case CbdStatus::TimeLimit:
      return "time-limit";
  }
  return "unknown";
}

Solution CbdResult::to_solution() const {
  Solution s;
  s.status = to_string(status);
  s.objective = status == CbdStatus::Optimal ? objective : 0.0;
  s.placement = placement;
  s.activated = activated;
  s.flows = flows;
  return s;
}

CbdResult solve_cbd(const InstanceIndex& idx, const CbdConfig& config) {
  config.check();
  const auto start = std::chrono::steady_clock::now();

  const UnreachableSets reach =
      unreachable_sets(transitive_closure(idx), idx);
  const FpModel base = build_fp(idx, config.variant, reach);

  CbdResult result;
  for (long t = 1; t <= config.iter_max; ++t) {
    IterationRecord rec;
    rec.iteration = static_cast<int>(t);

    // Master: the base model plus every cut collected so far. Each solve is
    // fresh; the pool only grows.
    FpModel master = base;
    for (const BendersCut& cut : result.cuts) append_cut(idx, master, cut);
    const MilpOutcome master_out = solve_milp(master.program, config.milp);
    rec.master_nodes = master_out.nodes;

    if (master_out.status == MilpStatus::Infeasible) {
      rec.cum_time_ms = ms_since(start);
      result.trace.push_back(std::move(rec));
      result.status = CbdStatus::Infeasible;
      break;
    }
    if (master_out.status != MilpStatus::Optimal)
      throw std::runtime_error("master solve hit its node limit");

    rec.master_feasible = true;
    rec.master_objective = master_out.objective;
    rec.placement = master.catalog.extract_placement(idx, master_out.x,
                                                     config.milp.tol_int);

    const TrModel tr = build_tr(idx, rec.placement);
    const LpOutcome tr_out = solve_lp(tr.lp, config.lp);
    if (tr_out.status == LpStatus::Optimal) {
      rec.tr_feasible = true;
      rec.cum_time_ms = ms_since(start);
      result.status = CbdStatus::Optimal;
      result.objective = master_out.objective;
      result.placement = rec.placement;
      result.flows = collect_flows(idx, tr, tr_out.x);
      // Activation from the master solution (extra activations cost power,
      // so the master never turns on an unused node unless its power is 0).
      for (int c = 0; c < idx.cloud_count(); ++c)
        if (master_out.x[master.catalog.y_var(c)] > 0.5)
          result.activated.push_back(idx.clouds()[c].node);
      result.trace.push_back(std::move(rec));
      break;
    }
    if (tr_out.status != LpStatus::Infeasible)
      throw std::runtime_error(
          std::string("routing subproblem solve failed: ") +
          to_string(tr_out.status));

    BendersCut cut =
        materialize_cut(idx, tr, tr_out.certificate, config.lp.tol_cert);
    cut.iteration = static_cast<int>(t);
    cut.certificate_id = static_cast<int>(result.cuts.size());
    rec.cut_id = static_cast<int>(result.cuts.size());
    rec.cut_nnz = static_cast<int>(cut.terms.size());
    result.cuts.push_back(std::move(cut));
    rec.cum_time_ms = ms_since(start);
    result.trace.push_back(std::move(rec));

    if (t == config.iter_max) {
      // Budget exhausted: no feasible solution is reported.
      result.status = CbdStatus::IterLimit;
      break;
    }
    if (config.time_limit_sec > 0.0 &&
        ms_since(start) > config.time_limit_sec * 1000.0) {
      result.status = CbdStatus::TimeLimit;
      break;
    }
  }
  result.total_time_ms = ms_since(start);
  return result;
}

GapImprovement gap_improvement(const InstanceIndex& idx,
                               const CbdConfig& config) {
  const UnreachableSets reach =
      unreachable_sets(transitive_closure(idx), idx);

  auto master_value = [&](FpVariant variant) -> std::optional<double> {
    const FpModel model = build_fp(idx, variant, reach);
    const MilpOutcome out = solve_milp(model.program, config.milp);
    if (out.status != MilpStatus::Optimal) return std::nullopt;
    return out.objective;
  };

  GapImprovement gap;
  const auto fp = master_value(FpVariant::FP);
  if (!fp) return gap;

  // The exact optimum comes from the decomposition itself (the exact method
  // of this solver); it matches the direct solve on every guarded instance.
  CbdConfig exact = config;
  exact.iter_max = kUnlimitedIterations;
  exact.variant = FpVariant::FP_II;
  const CbdResult ns = solve_cbd(idx, exact);
  if (ns.status != CbdStatus::Optimal) return gap;

  const double denom = ns.objective - *fp;
  if (denom <= 1e-9 * (1.0 + std::abs(ns.objective))) return gap;

  auto improvement = [&](FpVariant variant) -> std::optional<double> {
    const auto value = master_value(variant);
    if (!value) return std::nullopt;
    const double ratio = (*value - *fp) / denom;
    return std::clamp(ratio, 0.0, 1.0);
  };
  gap.fp_i = improvement(FpVariant::FP_I);
  gap.fp_ii = improvement(FpVariant::FP_II);
  return gap;
}

void write_trace_csv(std::ostream& out, const CbdResult& result) {
  out << "iteration,master_obj,tr_status,cut_nnz,cum_time_ms\n";
  for (const auto& rec : result.trace) {
    out << rec.iteration << ",";
    if (rec.master_feasible)
      out << rec.master_objective;
    else
      out << "infeasible";
    out << "," << (rec.master_feasible
                       ? (rec.tr_feasible ? "feasible" : "infeasible")
                       : "skipped")
        << "," << rec.cut_nnz << "," << rec.cum_time_ms << "\n";
  }
}

}  // namespace nslice
