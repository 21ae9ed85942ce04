#include "nslice/solution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nslice/instance_io.hpp"

namespace nslice {

namespace {

using ordered_json = nlohmann::ordered_json;

}  // namespace

double placement_objective(const InstanceIndex& idx,
                           const Placement& placement) {
  double obj = 0.0;
  std::set<int> hosts;
  for (int k = 0; k < idx.service_count(); ++k) {
    for (int s = 1; s <= idx.chain_length(k); ++s) {
      const int node = placement[k][s - 1];
      hosts.insert(node);
      const double cost = idx.stage_cost(k, s, idx.cloud_slot(node));
      obj += std::max(0.0, cost);
    }
  }
  for (int node : hosts)
    obj += idx.clouds()[idx.cloud_slot(node)].activation_power;
  return obj;
}

std::vector<int> activated_nodes(const InstanceIndex& idx,
                                 const Placement& placement) {
  std::set<int> hosts;
  for (int k = 0; k < idx.service_count(); ++k)
    for (int s = 1; s <= idx.chain_length(k); ++s)
      hosts.insert(placement[k][s - 1]);
  return {hosts.begin(), hosts.end()};
}

FeasibilityReport check_ns_solution(const InstanceIndex& idx,
                                    const Solution& solution, double tol) {
  FeasibilityReport report;
  auto flag = [&report](const std::string& msg) {
    report.violations.push_back(msg);
  };

  if (static_cast<int>(solution.placement.size()) != idx.service_count()) {
    flag("placement does not cover every service");
    return report;
  }

  std::set<int> active(solution.activated.begin(), solution.activated.end());
  std::vector<double> node_load(idx.node_count(), 0.0);
  for (int k = 0; k < idx.service_count(); ++k) {
    if (static_cast<int>(solution.placement[k].size()) !=
        idx.chain_length(k)) {
      flag("service " + std::to_string(k) +
           ": placement does not cover every stage");
      return report;
    }
    for (int s = 1; s <= idx.chain_length(k); ++s) {
      const int node = solution.placement[k][s - 1];
      if (node < 0 || node >= idx.node_count() || idx.cloud_slot(node) < 0) {
        flag("service " + std::to_string(k) + " stage " + std::to_string(s) +
             ": host is not a cloud node");
        continue;
      }
      const int slot = idx.cloud_slot(node);
      if (idx.stage_cost(k, s, slot) < 0.0)
        flag("service " + std::to_string(k) + " stage " + std::to_string(s) +
             ": function not processable at " + idx.node_name(node));
      if (!active.count(node))
        flag("service " + std::to_string(k) + " stage " + std::to_string(s) +
             ": host " + idx.node_name(node) + " not activated");
      node_load[node] += idx.flow_rate(k, s);
    }
  }

  for (const auto& cloud : idx.clouds()) {
    if (cloud.compute_capacity.is_unlimited()) continue;
    if (node_load[cloud.node] > cloud.compute_capacity.value() + tol)
      flag("compute capacity exceeded at " + idx.node_name(cloud.node));
  }

  // Link loads and per-flow conservation, both recomputed from raw flows.
  std::vector<double> link_load(idx.link_count(), 0.0);
  for (const auto& f : solution.flows) {
    if (f.link < 0 || f.link >= idx.link_count()) {
      flag("flow references an unknown link");
      return report;
    }
    if (f.service < 0 || f.service >= idx.service_count() || f.flow < 0 ||
        f.flow > idx.chain_length(f.service)) {
      flag("flow references an unknown traffic flow");
      return report;
    }
    if (f.value < -tol)
      flag("negative flow value on link " + std::to_string(f.link));
    link_load[f.link] += idx.flow_rate(f.service, f.flow) * f.value;
  }
  for (int l = 0; l < idx.link_count(); ++l) {
    const auto& link = idx.links()[l];
    if (link.capacity.is_unlimited()) continue;
    if (link_load[l] > link.capacity.value() + tol)
      flag("link capacity exceeded on " + idx.node_name(link.tail) + "->" +
           idx.node_name(link.head));
  }

  for (int k = 0; k < idx.service_count(); ++k) {
    const int len = idx.chain_length(k);
    for (int flow = 0; flow <= len; ++flow) {
      std::vector<double> net(idx.node_count(), 0.0);  // inflow minus outflow
      for (const auto& f : solution.flows) {
        if (f.service != k || f.flow != flow) continue;
        net[idx.links()[f.link].head] += f.value;
        net[idx.links()[f.link].tail] -= f.value;
      }
      for (int i = 0; i < idx.node_count(); ++i) {
        double expected = 0.0;
        if (flow == 0 && i == idx.services()[k].source) expected -= 1.0;
        if (flow == len && i == idx.services()[k].destination) expected += 1.0;
        if (idx.cloud_slot(i) >= 0) {
          if (flow < len && solution.placement[k][flow] == i) expected += 1.0;
          if (flow >= 1 && solution.placement[k][flow - 1] == i)
            expected -= 1.0;
        }
        if (std::abs(net[i] - expected) > tol) {
          std::ostringstream msg;
          msg << "flow conservation violated for service " << k << " flow "
              << flow << " at node " << idx.node_name(i) << " (net "
              << net[i] << ", expected " << expected << ")";
          flag(msg.str());
        }
      }
    }
  }

  const double obj = placement_objective(idx, solution.placement);
  double activation_extra = 0.0;
  for (int node : solution.activated) {
    if (node < 0 || node >= idx.node_count() || idx.cloud_slot(node) < 0) {
      flag("activated list names a non-cloud node");
      continue;
    }
  }
  // Activating extra nodes is feasible but costs power; the reported
  // objective must match the activation set actually reported.
  std::set<int> hosts;
  for (int k = 0; k < idx.service_count(); ++k)
    for (int s = 1; s <= idx.chain_length(k); ++s)
      hosts.insert(solution.placement[k][s - 1]);
  for (int node : active)
    if (!hosts.count(node) && idx.cloud_slot(node) >= 0)
      activation_extra += idx.clouds()[idx.cloud_slot(node)].activation_power;
  if (std::abs(solution.objective - (obj + activation_extra)) >
      tol * (1.0 + std::abs(solution.objective)))
    flag("reported objective does not match the solution");

  return report;
}

std::string solution_to_json(const InstanceIndex& idx, const Solution& s) {
  ordered_json root;
  root["schema_version"] = 1;
  root["status"] = s.status;
  root["objective"] = format_number(s.objective);
  ordered_json placement;
  for (int k = 0; k < static_cast<int>(s.placement.size()); ++k) {
    ordered_json hosts = ordered_json::array();
    for (int node : s.placement[k]) hosts.push_back(idx.node_name(node));
    placement[idx.instance().services[k].id] = std::move(hosts);
  }
  root["placement"] = std::move(placement);
  ordered_json activated = ordered_json::array();
  for (int node : s.activated) activated.push_back(idx.node_name(node));
  root["activated"] = std::move(activated);
  ordered_json flows = ordered_json::array();
  for (const auto& f : s.flows) {
    ordered_json jf;
    jf["tail"] = idx.node_name(idx.links()[f.link].tail);
    jf["head"] = idx.node_name(idx.links()[f.link].head);
    jf["service"] = idx.instance().services[f.service].id;
    jf["flow"] = f.flow;
    jf["value"] = format_number(f.value);
    flows.push_back(std::move(jf));
  }
  root["flows"] = std::move(flows);
  return root.dump(2) + "\n";
}

Solution solution_from_json(const InstanceIndex& idx,
                            const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("solution: ") + e.what());
  }
  if (!root.is_object() || !root.contains("placement"))
    throw ParseError("solution: missing field 'placement'");

  Solution s;
  s.status = root.value("status", "unknown");
  if (!root.contains("objective") || !root["objective"].is_string())
    throw ParseError("solution: missing field 'objective'");
  s.objective = parse_number(root["objective"].get<std::string>(),
                             "solution.objective");

  std::map<std::string, int> service_of;
  for (int k = 0; k < idx.service_count(); ++k)
    service_of[idx.instance().services[k].id] = k;

  s.placement.assign(idx.service_count(), {});
  const ordered_json& placement = root["placement"];
  if (!placement.is_object())
    throw ParseError("solution: 'placement' must be an object");
  for (auto it = placement.begin(); it != placement.end(); ++it) {
    auto sit = service_of.find(it.key());
    if (sit == service_of.end())
      throw ParseError("solution.placement: unknown service '" + it.key() +
                       "'");
    for (const auto& jn : it.value()) {
      const int node = idx.node_index(jn.get<std::string>());
      if (node < 0)
        throw ParseError("solution.placement: unknown node '" +
                         jn.get<std::string>() + "'");
      s.placement[sit->second].push_back(node);
    }
  }

  if (root.contains("activated"))
    for (const auto& jn : root["activated"]) {
      const int node = idx.node_index(jn.get<std::string>());
      if (node < 0)
        throw ParseError("solution.activated: unknown node '" +
                         jn.get<std::string>() + "'");
      s.activated.push_back(node);
    }

  if (root.contains("flows"))
    for (const auto& jf : root["flows"]) {
      FlowAssignment f;
      const int tail = idx.node_index(jf.at("tail").get<std::string>());
      const int head = idx.node_index(jf.at("head").get<std::string>());
      for (int l = 0; l < idx.link_count(); ++l)
        if (idx.links()[l].tail == tail && idx.links()[l].head == head)
          f.link = l;
      if (f.link < 0) throw ParseError("solution.flows: unknown link");
      auto sit = service_of.find(jf.at("service").get<std::string>());
      if (sit == service_of.end())
        throw ParseError("solution.flows: unknown service");
      f.service = sit->second;
      f.flow = jf.at("flow").get<int>();
      f.value = parse_number(jf.at("value").get<std::string>(),
                             "solution.flows.value");
      s.flows.push_back(f);
    }
  return s;
}

void save_solution(const InstanceIndex& idx, const Solution& s,
                   const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << solution_to_json(idx, s);
}

Solution load_solution(const InstanceIndex& idx, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return solution_from_json(idx, buf.str());
}

}  // namespace nslice
