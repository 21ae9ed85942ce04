#include "nslice/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nslice {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

ValidationReport validate(const Instance& instance) {
  ValidationReport report;
  auto flag = [&report](const std::string& msg) {
    report.violations.push_back(msg);
  };

  const Network& net = instance.network;
  std::set<std::string> nodes;
  for (const std::string& n : net.nodes) {
    if (!nodes.insert(n).second) flag("duplicate node '" + n + "'");
    if (n.empty()) flag("empty node name");
  }

  std::set<std::pair<std::string, std::string>> seen_links;
  for (const Link& l : net.links) {
    if (!nodes.count(l.tail))
      flag("link " + l.tail + "->" + l.head + ": unknown endpoint '" + l.tail +
           "'");
    if (!nodes.count(l.head))
      flag("link " + l.tail + "->" + l.head + ": unknown endpoint '" + l.head +
           "'");
    if (l.tail == l.head) flag("self-loop at node '" + l.tail + "'");
    if (!seen_links.insert({l.tail, l.head}).second)
      flag("duplicate link " + l.tail + "->" + l.head);
    if (!l.capacity.is_unlimited() && !finite_nonneg(l.capacity.value()))
      flag("link " + l.tail + "->" + l.head + ": capacity must be >= 0");
  }

  std::set<std::string> clouds;
  for (const CloudNode& c : net.cloud_nodes) {
    if (!nodes.count(c.node)) flag("cloud node '" + c.node + "' not declared");
    if (!clouds.insert(c.node).second)
      flag("duplicate cloud node '" + c.node + "'");
    if (!c.compute_capacity.is_unlimited() &&
        !finite_nonneg(c.compute_capacity.value()))
      flag("cloud node '" + c.node + "': compute capacity must be >= 0");
    if (!finite_nonneg(c.activation_power))
      flag("cloud node '" + c.node + "': activation power must be >= 0");
  }

  std::set<std::string> service_ids;
  for (const Service& s : instance.services) {
    const std::string ctx = "service '" + s.id + "': ";
    if (!service_ids.insert(s.id).second) flag("duplicate service id '" + s.id + "'");
    if (!nodes.count(s.source)) flag(ctx + "unknown source '" + s.source + "'");
    if (!nodes.count(s.destination))
      flag(ctx + "unknown destination '" + s.destination + "'");
    if (clouds.count(s.source)) flag(ctx + "source inside cloud set");
    if (clouds.count(s.destination)) flag(ctx + "destination inside cloud set");
    if (s.chain.empty()) flag(ctx + "empty function chain");
    if (!finite_pos(s.rate_before)) flag(ctx + "rate before chain must be > 0");
    int stage = 0;
    for (const Stage& st : s.chain) {
      ++stage;
      std::ostringstream sctx;
      sctx << ctx << "stage " << stage << ": ";
      if (!finite_pos(st.rate_after)) flag(sctx.str() + "rate must be > 0");
      for (const auto& [node, cost] : st.placement_cost) {
        if (!clouds.count(node))
          flag(sctx.str() + "placement cost on non-cloud node '" + node + "'");
        if (!finite_nonneg(cost))
          flag(sctx.str() + "placement cost at '" + node + "' must be >= 0");
      }
    }
  }
  return report;
}

InstanceIndex::InstanceIndex(const Instance& instance) : instance_(instance) {
  ValidationReport report = validate(instance);
  if (!report.ok()) {
    std::string msg = "invalid instance:";
    for (const std::string& v : report.violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
  }

  node_names_ = instance.network.nodes;
  for (int i = 0; i < static_cast<int>(node_names_.size()); ++i)
    node_index_[node_names_[i]] = i;

  const int n = node_count();
  out_links_.resize(n);
  in_links_.resize(n);
  for (const Link& l : instance.network.links) {
    LinkRef ref;
    ref.tail = node_index_.at(l.tail);
    ref.head = node_index_.at(l.head);
    ref.capacity = l.capacity;
    const int id = static_cast<int>(links_.size());
    links_.push_back(ref);
    out_links_[ref.tail].push_back(id);
    in_links_[ref.head].push_back(id);
  }

  cloud_slot_.assign(n, -1);
  for (const CloudNode& c : instance.network.cloud_nodes) {
    CloudRef ref;
    ref.node = node_index_.at(c.node);
    ref.compute_capacity = c.compute_capacity;
    ref.activation_power = c.activation_power;
    cloud_slot_[ref.node] = static_cast<int>(clouds_.size());
    clouds_.push_back(ref);
  }

  for (const Service& s : instance.services) {
    ServiceRef ref;
    ref.source = node_index_.at(s.source);
    ref.destination = node_index_.at(s.destination);
    ref.rate_before = s.rate_before;
    for (const Stage& st : s.chain) {
      StageRef sr;
      sr.rate_after = st.rate_after;
      for (const auto& [node, cost] : st.placement_cost)
        sr.costs.emplace_back(cloud_slot_[node_index_.at(node)], cost);
      std::sort(sr.costs.begin(), sr.costs.end());
      ref.stages.push_back(std::move(sr));
      ++total_stages_;
    }
    services_.push_back(std::move(ref));
  }
}

int InstanceIndex::node_index(const std::string& name) const {
  auto it = node_index_.find(name);
  return it == node_index_.end() ? -1 : it->second;
}

std::span<const int> InstanceIndex::out_links(int node) const {
  return out_links_[node];
}

std::span<const int> InstanceIndex::in_links(int node) const {
  return in_links_[node];
}

double InstanceIndex::stage_cost(int service, int stage, int cloud_slot) const {
  const StageRef& st = services_[service].stages[stage - 1];
  for (const auto& [slot, cost] : st.costs)
    if (slot == cloud_slot) return cost;
  return -1.0;
}

}  // namespace nslice
