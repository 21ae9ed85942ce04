#include "nslice/milp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace nslice {

void MixedBinaryProgram::check_well_formed() const {
  lp.check_well_formed();
  for (int j : binaries) {
    if (j < 0 || j >= lp.num_vars())
      throw std::invalid_argument("binary id out of range");
    if (lp.lower(j) < 0.0 || lp.upper(j) > 1.0)
      throw std::invalid_argument("binary variable " + lp.var_name(j) +
                                  " must have bounds within [0,1]");
  }
}

namespace {

struct Node {
  long id = 0;
  double bound = -kInf;  // parent LP value: optimistic estimate
  std::vector<std::pair<int, int>> fixings;  // (variable, 0/1)
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

}  // namespace

MilpOutcome solve_milp(const MixedBinaryProgram& p,
                       const BranchBoundConfig& config) {
  p.check_well_formed();

  MilpOutcome out;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(Node{});
  long next_id = 1;
  double incumbent = kInf;
  std::vector<double> incumbent_x;
  double best_bound_seen = -kInf;

  LinearProgram lp = p.lp;
  std::vector<std::pair<double, double>> original_bounds;
  original_bounds.reserve(p.binaries.size());
  for (int j : p.binaries) original_bounds.push_back({lp.lower(j), lp.upper(j)});

  auto cutoff = [&](double bound) {
    if (incumbent == kInf) return false;
    const double tol = config.tol_obj_rel * std::max(1.0, std::abs(incumbent));
    return bound >= incumbent - tol;
  };

  double remaining_bound = kInf;  // best bound among unexplored nodes at exit
  while (!open.empty()) {
    Node node = std::move(const_cast<Node&>(open.top()));
    open.pop();

    if (node.bound > best_bound_seen && node.bound != -kInf) {
      best_bound_seen = node.bound;
      out.bound_history.emplace_back(out.nodes, node.bound);
    }
    if (cutoff(node.bound)) {
      // Best-bound order: every remaining node is at least as bad.
      remaining_bound = node.bound;
      break;
    }
    if (out.nodes >= config.node_limit) {
      out.status = MilpStatus::NodeLimit;
      out.has_incumbent = incumbent != kInf;
      if (out.has_incumbent) {
        out.objective = incumbent;
        out.x = incumbent_x;
        out.bound_gap = incumbent - std::max(best_bound_seen, node.bound);
      }
      return out;
    }
    ++out.nodes;

    for (const auto& [var, value] : node.fixings)
      lp.set_bounds(var, value, value);
    LpOutcome relax = solve_lp(lp, config.lp);
    for (size_t i = 0; i < p.binaries.size(); ++i)
      lp.set_bounds(p.binaries[i], original_bounds[i].first,
                    original_bounds[i].second);

    if (relax.status == LpStatus::Infeasible) continue;
    if (relax.status != LpStatus::Optimal)
      throw std::runtime_error("node relaxation failed: " +
                               std::string(to_string(relax.status)));
    if (cutoff(relax.objective)) continue;

    // Most fractional binary, ties by lowest variable id.
    int branch_var = -1;
    double branch_frac = config.tol_int;
    for (int j : p.binaries) {
      const double v = relax.x[j];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > branch_frac) {
        branch_frac = frac;
        branch_var = j;
      }
    }

    if (branch_var < 0) {
      // Integral on all binaries: candidate incumbent (values snapped).
      if (relax.objective < incumbent) {
        incumbent = relax.objective;
        incumbent_x = relax.x;
        for (int j : p.binaries) incumbent_x[j] = std::round(incumbent_x[j]);
      }
      continue;
    }

    for (int value : {0, 1}) {
      Node child;
      child.id = next_id++;
      child.bound = relax.objective;
      child.fixings = node.fixings;
      child.fixings.emplace_back(branch_var, value);
      open.push(std::move(child));
    }
  }

  if (incumbent == kInf) {
    out.status = MilpStatus::Infeasible;
    return out;
  }
  out.status = MilpStatus::Optimal;
  out.has_incumbent = true;
  out.objective = incumbent;
  out.x = std::move(incumbent_x);
  out.bound_gap = std::max(0.0, incumbent - std::min(incumbent, remaining_bound));
  return out;
}

LpOutcome root_relaxation_value(const MixedBinaryProgram& p,
                                const SimplexConfig& config) {
  p.check_well_formed();
  return solve_lp(p.lp, config);
}

const char* to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::Optimal:
      return "optimal";
    case MilpStatus::Infeasible:
      return "infeasible";
    case MilpStatus::NodeLimit:
      return "node-limit";
  }
  return "unknown";
}

}  // namespace nslice
