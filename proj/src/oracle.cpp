#include "nslice/oracle.hpp"

#include <cmath>
#include <set>

namespace nslice {

namespace {

// Processable host nodes per (service, stage), ascending by node index.
std::vector<std::vector<std::vector<int>>> stage_hosts(
    const InstanceIndex& idx) {
  std::vector<std::vector<std::vector<int>>> hosts(idx.service_count());
  for (int k = 0; k < idx.service_count(); ++k) {
    hosts[k].resize(idx.chain_length(k));
    for (int s = 1; s <= idx.chain_length(k); ++s) {
      std::vector<int> nodes;
      for (const auto& [slot, cost] : idx.services()[k].stages[s - 1].costs)
        nodes.push_back(idx.clouds()[slot].node);
      std::sort(nodes.begin(), nodes.end());
      hosts[k][s - 1] = std::move(nodes);
    }
  }
  return hosts;
}

double enumeration_size(const InstanceIndex& idx) {
  double size = 1.0;
  for (int k = 0; k < idx.service_count(); ++k)
    for (int s = 0; s < idx.chain_length(k); ++s)
      size *= static_cast<double>(idx.cloud_count());
  return size;
}

Placement placement_at(const std::vector<std::vector<std::vector<int>>>& hosts,
                       long index) {
  Placement placement(hosts.size());
  long rest = index;
  for (size_t k = 0; k < hosts.size(); ++k) {
    placement[k].resize(hosts[k].size());
    for (size_t s = 0; s < hosts[k].size(); ++s) {
      const long n = static_cast<long>(hosts[k][s].size());
      placement[k][s] = hosts[k][s][rest % n];
      rest /= n;
    }
  }
  return placement;
}

bool within_compute_capacity(const InstanceIndex& idx,
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

long total_choices(const std::vector<std::vector<std::vector<int>>>& hosts,
                   bool* any_empty) {
  long total = 1;
  *any_empty = false;
  for (const auto& svc : hosts)
    for (const auto& stage : svc) {
      if (stage.empty()) {
        *any_empty = true;
        return 0;
      }
      total *= static_cast<long>(stage.size());
    }
  return total;
}

OracleResult run_enumeration(const InstanceIndex& idx,
                             const OracleConfig& config, bool parallel) {
  if (enumeration_size(idx) > config.guard)
    throw GuardExceeded("placement enumeration exceeds the oracle guard");

  const auto hosts = stage_hosts(idx);
  bool any_empty = false;
  const long total = total_choices(hosts, &any_empty);

  OracleResult result;
  if (any_empty) return result;  // some stage is processable nowhere
  if (idx.service_count() == 0) {
    result.feasible = true;
    result.objective = 0.0;
    return result;
  }

  // Deterministic reduction: the winner is the lowest enumeration index
  // among placements achieving the minimum objective.
  double best_obj = kInf;
  long best_index = -1;

#pragma omp parallel if (parallel)
  {
    double local_obj = kInf;
    long local_index = -1;
#pragma omp for schedule(dynamic, 16) nowait
    for (long i = 0; i < total; ++i) {
      const Placement placement = placement_at(hosts, i);
      if (!within_compute_capacity(idx, placement)) continue;
      const double obj = placement_objective(idx, placement);
      // Ties resolve to the lowest enumeration index, independent of the
      // schedule, so the parallel and serial runs agree exactly.
      if (obj > local_obj || (obj == local_obj && i > local_index)) continue;
      if (!oracle_tr_feasible(idx, placement, config.lp)) continue;
      local_obj = obj;
      local_index = i;
    }
#pragma omp critical
    {
      if (local_index >= 0 &&
          (local_obj < best_obj ||
           (local_obj == best_obj && local_index < best_index))) {
        best_obj = local_obj;
        best_index = local_index;
      }
    }
  }

  if (best_index >= 0) {
    result.feasible = true;
    result.objective = best_obj;
    result.placement = placement_at(hosts, best_index);
  }
  return result;
}

}  // namespace

bool oracle_tr_feasible(const InstanceIndex& idx, const Placement& placement,
                        const SimplexConfig& config) {
  // Routing system written directly from the model statement: one variable
  // per (link, service, segment), link loads within capacity, and exact flow
  // balance at every node for every segment of every chain.
  LinearProgram lp;
  const int links = idx.link_count();
  auto var = [&](int k, int seg, int link) {
    int offset = 0;
    for (int kk = 0; kk < k; ++kk)
      offset += (idx.chain_length(kk) + 1) * links;
    return offset + seg * links + link;
  };
  for (int k = 0; k < idx.service_count(); ++k)
    for (int seg = 0; seg <= idx.chain_length(k); ++seg)
      for (int l = 0; l < links; ++l) lp.add_variable(0.0, kInf);

  for (int l = 0; l < links; ++l) {
    if (idx.links()[l].capacity.is_unlimited()) continue;
    std::vector<LinearProgram::Term> terms;
    for (int k = 0; k < idx.service_count(); ++k)
      for (int seg = 0; seg <= idx.chain_length(k); ++seg)
        terms.push_back({var(k, seg, l), idx.flow_rate(k, seg)});
    lp.add_row(RowSense::LE, idx.links()[l].capacity.value(),
               std::move(terms));
  }

  for (int k = 0; k < idx.service_count(); ++k) {
    const int len = idx.chain_length(k);
    for (int seg = 0; seg <= len; ++seg) {
      // Endpoints of this segment: source / previous host, next host / dest.
      const int from =
          seg == 0 ? idx.services()[k].source : placement[k][seg - 1];
      const int to =
          seg == len ? idx.services()[k].destination : placement[k][seg];
      for (int i = 0; i < idx.node_count(); ++i) {
        std::vector<LinearProgram::Term> terms;
        for (int l : idx.in_links(i)) terms.push_back({var(k, seg, l), 1.0});
        for (int l : idx.out_links(i)) terms.push_back({var(k, seg, l), -1.0});
        double balance = 0.0;
        if (i == to) balance += 1.0;
        if (i == from) balance -= 1.0;
        lp.add_row(RowSense::EQ, balance, std::move(terms));
      }
    }
  }
  return solve_lp(lp, config).status == LpStatus::Optimal;
}

std::vector<Placement> all_placements(const InstanceIndex& idx, double guard) {
  if (enumeration_size(idx) > guard)
    throw GuardExceeded("placement enumeration exceeds the oracle guard");
  const auto hosts = stage_hosts(idx);
  bool any_empty = false;
  const long total = total_choices(hosts, &any_empty);
  std::vector<Placement> placements;
  if (any_empty || idx.service_count() == 0) return placements;
  placements.reserve(total);
  for (long i = 0; i < total; ++i)
    placements.push_back(placement_at(hosts, i));
  return placements;
}

OracleResult brute_force_ns(const InstanceIndex& idx,
                            const OracleConfig& config) {
  return run_enumeration(idx, config, true);
}

OracleResult brute_force_ns_serial(const InstanceIndex& idx,
                                   const OracleConfig& config) {
  return run_enumeration(idx, config, false);
}

}  // namespace nslice
