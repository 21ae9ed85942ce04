#include "nslice/reachability.hpp"

#include <algorithm>

namespace nslice {

namespace {

void closure_row(const InstanceIndex& idx, int source, std::uint8_t* row) {
  std::vector<int> queue;
  queue.reserve(16);
  queue.push_back(source);
  row[source] = 1;
  for (size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (int link : idx.out_links(u)) {
      const int v = idx.links()[link].head;
      if (!row[v]) {
        row[v] = 1;
        queue.push_back(v);
      }
    }
  }
}

}  // namespace

ReachabilityMatrix transitive_closure(const InstanceIndex& idx) {
  const int n = idx.node_count();
  ReachabilityMatrix m;
  m.n = n;
  m.bits.assign(static_cast<size_t>(n) * n, 0);
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < n; ++i)
    closure_row(idx, i, m.bits.data() + static_cast<size_t>(i) * n);
  return m;
}

ReachabilityMatrix transitive_closure_serial(const InstanceIndex& idx) {
  const int n = idx.node_count();
  ReachabilityMatrix m;
  m.n = n;
  m.bits.assign(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    closure_row(idx, i, m.bits.data() + static_cast<size_t>(i) * n);
  return m;
}

UnreachableSets unreachable_sets(const ReachabilityMatrix& reach,
                                 const InstanceIndex& idx) {
  UnreachableSets sets;
  std::vector<int> cloud_nodes;
  for (const auto& c : idx.clouds()) cloud_nodes.push_back(c.node);
  std::sort(cloud_nodes.begin(), cloud_nodes.end());

  for (const auto& svc : idx.services()) {
    std::vector<int> vs, vd;
    for (int v : cloud_nodes) {
      if (!reach.at(svc.source, v)) vs.push_back(v);
      if (!reach.at(v, svc.destination)) vd.push_back(v);
    }
    sets.from_source.push_back(std::move(vs));
    sets.to_destination.push_back(std::move(vd));
  }

  for (const auto& cloud : idx.clouds()) {
    std::vector<int> vc;
    for (int v : cloud_nodes)
      if (v != cloud.node && !reach.at(cloud.node, v)) vc.push_back(v);
    sets.from_cloud.push_back(std::move(vc));
  }
  return sets;
}

}  // namespace nslice
