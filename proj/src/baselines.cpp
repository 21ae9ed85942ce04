#include "nslice/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nslice/simplex.hpp"

namespace nslice {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

bool respects_compute_capacity(const InstanceIndex& idx,
                               const Placement& placement) {
  std::vector<double> load(idx.node_count(), 0.0);
  for (int k = 0; k < idx.service_count(); ++k)
    for (int s = 1; s <= idx.chain_length(k); ++s)
      load[placement[k][s - 1]] += idx.flow_rate(k, s);
  for (const auto& cloud : idx.clouds()) {
    if (cloud.compute_capacity.is_unlimited()) continue;
    if (load[cloud.node] > cloud.compute_capacity.value() + 1e-9) return false;
  }
  return true;
}

// Shared tail of both rounding heuristics: capacity check, routing check,
// objective and flows from the fixed placement.
BaselineResult finish_rounding(const InstanceIndex& idx,
                               const Placement& placement,
                               const SimplexConfig& config,
                               std::chrono::steady_clock::time_point start) {
  BaselineResult result;
  if (!respects_compute_capacity(idx, placement)) {
    result.note = "rounded placement exceeds compute capacity";
    result.time_ms = ms_since(start);
    return result;
  }
  const TrModel tr = build_tr(idx, placement);
  const LpOutcome tr_out = solve_lp(tr.lp, config);
  if (tr_out.status != LpStatus::Optimal) {
    result.note = "rounded placement is unroutable";
    result.time_ms = ms_since(start);
    return result;
  }
  result.status = BaselineStatus::Feasible;
  result.placement = placement;
  result.objective = placement_objective(idx, placement);
  result.activated = activated_nodes(idx, placement);
  for (int k = 0; k < idx.service_count(); ++k)
    for (int f = 0; f <= idx.chain_length(k); ++f)
      for (int l = 0; l < idx.link_count(); ++l) {
        const double v = tr_out.x[tr.r_var(l, k, f)];
        if (v > 1e-12) result.flows.push_back({l, k, f, v});
      }
  result.time_ms = ms_since(start);
  return result;
}

}  // namespace

const char* to_string(BaselineStatus status) {
  return status == BaselineStatus::Feasible ? "feasible"
                                            : "infeasible-or-failed";
}

Solution BaselineResult::to_solution() const {
  Solution s;
  s.status = to_string(status);
  s.objective = objective;
  s.placement = placement;
  s.activated = activated;
  s.flows = flows;
  return s;
}

BaselineResult solve_direct(const InstanceIndex& idx,
                            const BranchBoundConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  BaselineResult result;
  const NsModel model = build_ns(idx);
  const MilpOutcome out = solve_milp(model.program, config);
  if (out.status != MilpStatus::Optimal) {
    result.note = std::string("direct solve: ") + to_string(out.status);
    result.time_ms = ms_since(start);
    return result;
  }
  result.status = BaselineStatus::Feasible;
  result.objective = out.objective;
  result.placement =
      model.catalog.extract_placement(idx, out.x, config.tol_int);
  for (int c = 0; c < idx.cloud_count(); ++c)
    if (out.x[model.catalog.y_var(c)] > 0.5)
      result.activated.push_back(idx.clouds()[c].node);
  for (int k = 0; k < idx.service_count(); ++k)
    for (int f = 0; f <= idx.chain_length(k); ++f)
      for (int l = 0; l < idx.link_count(); ++l) {
        const double v = out.x[model.catalog.r_var(l, k, f)];
        if (v > 1e-12) result.flows.push_back({l, k, f, v});
      }
  result.time_ms = ms_since(start);
  return result;
}

BaselineResult solve_lp_one_shot_rounding(const InstanceIndex& idx,
                                          const SimplexConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const NsModel model = build_ns(idx);
  const LpOutcome relax = solve_lp(model.program.lp, config);
  if (relax.status != LpStatus::Optimal) {
    BaselineResult result;
    result.note = std::string("relaxation: ") + to_string(relax.status);
    result.time_ms = ms_since(start);
    return result;
  }

  std::vector<int> slots_by_node(idx.cloud_count());
  for (int c = 0; c < idx.cloud_count(); ++c) slots_by_node[c] = c;
  std::sort(slots_by_node.begin(), slots_by_node.end(), [&](int a, int b) {
    return idx.clouds()[a].node < idx.clouds()[b].node;
  });

  Placement placement(idx.service_count());
  for (int k = 0; k < idx.service_count(); ++k) {
    for (int s = 1; s <= idx.chain_length(k); ++s) {
      int host = -1;
      double best = -1.0;
      for (int c : slots_by_node) {
        const int var = model.catalog.x_var(k, s, c);
        if (var < 0) continue;
        if (relax.x[var] > best + 1e-12) {  // ties keep the lowest node id
          best = relax.x[var];
          host = idx.clouds()[c].node;
        }
      }
      if (host < 0) {
        BaselineResult result;
        result.note = "a stage has no processable cloud node";
        result.time_ms = ms_since(start);
        return result;
      }
      placement[k].push_back(host);
    }
  }
  return finish_rounding(idx, placement, config, start);
}

BaselineResult solve_lp_dynamic_rounding(const InstanceIndex& idx,
                                         const SimplexConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  NsModel model = build_ns(idx);
  auto& lp = model.program.lp;

  std::vector<std::vector<int>> fixed(idx.service_count());
  int unfixed = 0;
  for (int k = 0; k < idx.service_count(); ++k) {
    fixed[k].assign(idx.chain_length(k), -1);
    unfixed += idx.chain_length(k);
  }

  auto fix_stage = [&](int k, int s, int slot) {
    for (int c = 0; c < idx.cloud_count(); ++c) {
      const int var = model.catalog.x_var(k, s, c);
      if (var < 0) continue;
      if (c == slot)
        lp.set_bounds(var, 1.0, 1.0);
      else
        lp.set_bounds(var, 0.0, 0.0);
    }
    fixed[k][s - 1] = idx.clouds()[slot].node;
    --unfixed;
  };

  while (unfixed > 0) {
    const LpOutcome relax = solve_lp(lp, config);
    if (relax.status != LpStatus::Optimal) {
      BaselineResult result;
      result.note = std::string("restricted relaxation: ") +
                    to_string(relax.status);
      result.time_ms = ms_since(start);
      return result;
    }

    // Fix every naturally integral unfixed stage in one sweep.
    bool fixed_any = false;
    for (int k = 0; k < idx.service_count(); ++k)
      for (int s = 1; s <= idx.chain_length(k); ++s) {
        if (fixed[k][s - 1] >= 0) continue;
        for (int c = 0; c < idx.cloud_count(); ++c) {
          const int var = model.catalog.x_var(k, s, c);
          if (var >= 0 && relax.x[var] >= 1.0 - 1e-9) {
            fix_stage(k, s, c);
            fixed_any = true;
            break;
          }
        }
      }
    if (unfixed == 0) break;
    if (fixed_any) continue;

    // Otherwise round the single variable closest to one.
    int bk = -1, bs = -1, bc = -1;
    double best = -1.0;
    for (int k = 0; k < idx.service_count(); ++k)
      for (int s = 1; s <= idx.chain_length(k); ++s) {
        if (fixed[k][s - 1] >= 0) continue;
        for (int c = 0; c < idx.cloud_count(); ++c) {
          const int var = model.catalog.x_var(k, s, c);
          if (var < 0) continue;
          if (relax.x[var] > best + 1e-12) {
            best = relax.x[var];
            bk = k;
            bs = s;
            bc = c;
          }
        }
      }
    if (bk < 0) {
      BaselineResult result;
      result.note = "no candidate variable to round";
      result.time_ms = ms_since(start);
      return result;
    }
    fix_stage(bk, bs, bc);
  }

  Placement placement(idx.service_count());
  for (int k = 0; k < idx.service_count(); ++k)
    placement[k] = fixed[k];
  return finish_rounding(idx, placement, config, start);
}

}  // namespace nslice
