#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace nslice {

/// Nonnegative capacity that is either a finite value or unlimited.
/// Kept as an explicit variant (not a sentinel float) so that unlimited
/// capacities survive serialization and can be branched on exactly.
class Capacity {
 public:
  Capacity() : unlimited_(false), value_(0.0) {}

  static Capacity unlimited() {
    Capacity c;
    c.unlimited_ = true;
    return c;
  }
  static Capacity finite(double value) {
    Capacity c;
    c.value_ = value;
    return c;
  }

  bool is_unlimited() const { return unlimited_; }
  /// Finite value; meaningless when unlimited.
  double value() const { return value_; }

  friend bool operator==(const Capacity& a, const Capacity& b) {
    return a.unlimited_ == b.unlimited_ &&
           (a.unlimited_ || a.value_ == b.value_);
  }

 private:
  bool unlimited_;
  double value_;
};

/// Directed substrate link with a communication capacity.
struct Link {
  std::string tail;
  std::string head;
  Capacity capacity;
};

/// A substrate node that can host service functions.
struct CloudNode {
  std::string node;
  Capacity compute_capacity;
  double activation_power = 0.0;
};

struct Network {
  std::vector<std::string> nodes;
  std::vector<Link> links;
  std::vector<CloudNode> cloud_nodes;
};

/// One function of a service chain. `placement_cost` maps a cloud node to
/// the power cost of hosting this function there; a cloud node absent from
/// the map cannot process the function at all.
struct Stage {
  std::string function;
  double rate_after = 0.0;  // data rate leaving this function
  std::map<std::string, double> placement_cost;
};

struct Service {
  std::string id;
  std::string source;
  std::string destination;
  double rate_before = 0.0;  // data rate entering the first function
  std::vector<Stage> chain;
};

struct Instance {
  Network network;
  std::vector<Service> services;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every structural invariant of the data model and reports all
/// violations found. Never throws; an empty report means well-formed.
ValidationReport validate(const Instance& instance);

/// Index structures over a validated instance: dense node/link/cloud ids,
/// adjacency lists, and per-service numeric views. Immutable after
/// construction and safe to share across threads. Throws std::invalid_argument
/// (listing the violations) when the instance does not validate.
class InstanceIndex {
 public:
  explicit InstanceIndex(const Instance& instance);

  struct LinkRef {
    int tail = -1;
    int head = -1;
    Capacity capacity;
  };
  struct CloudRef {
    int node = -1;
    Capacity compute_capacity;
    double activation_power = 0.0;
  };
  struct StageRef {
    double rate_after = 0.0;
    // (cloud slot, placement cost), ascending by slot; absent slot = forbidden
    std::vector<std::pair<int, double>> costs;
  };
  struct ServiceRef {
    int source = -1;
    int destination = -1;
    double rate_before = 0.0;
    std::vector<StageRef> stages;
  };

  int node_count() const { return static_cast<int>(node_names_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }
  int cloud_count() const { return static_cast<int>(clouds_.size()); }
  int service_count() const { return static_cast<int>(services_.size()); }

  const std::vector<LinkRef>& links() const { return links_; }
  const std::vector<CloudRef>& clouds() const { return clouds_; }
  const std::vector<ServiceRef>& services() const { return services_; }

  const std::string& node_name(int node) const { return node_names_[node]; }
  /// -1 when the name is unknown.
  int node_index(const std::string& name) const;
  /// Slot of `node` in clouds(), or -1 when it is not a cloud node.
  int cloud_slot(int node) const { return cloud_slot_[node]; }

  std::span<const int> out_links(int node) const;
  std::span<const int> in_links(int node) const;

  int chain_length(int service) const {
    return static_cast<int>(services_[service].stages.size());
  }
  /// Rate of traffic flow (service, flow_index); flow 0 precedes the first
  /// function, flow s leaves function s.
  double flow_rate(int service, int flow_index) const {
    const ServiceRef& s = services_[service];
    return flow_index == 0 ? s.rate_before
                           : s.stages[flow_index - 1].rate_after;
  }
  /// Placement cost of stage (1-based) at a cloud slot; negative = forbidden.
  double stage_cost(int service, int stage, int cloud_slot) const;

  int total_stages() const { return total_stages_; }
  int total_flows() const { return total_stages_ + service_count(); }

  const Instance& instance() const { return instance_; }

 private:
  Instance instance_;
  std::vector<std::string> node_names_;
  std::map<std::string, int> node_index_;
  std::vector<LinkRef> links_;
  std::vector<CloudRef> clouds_;
  std::vector<ServiceRef> services_;
  std::vector<int> cloud_slot_;
  std::vector<std::vector<int>> out_links_;
  std::vector<std::vector<int>> in_links_;
  int total_stages_ = 0;
};

}  // namespace nslice
