#include "nslice/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nslice {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

const ordered_json& require(const ordered_json& obj, const char* field,
                            const std::string& context) {
  if (!obj.is_object())
    throw ParseError(context + ": expected an object");
  auto it = obj.find(field);
  if (it == obj.end())
    throw ParseError(context + ": missing field '" + field + "'");
  return *it;
}

std::string require_string(const ordered_json& obj, const char* field,
                           const std::string& context) {
  const ordered_json& v = require(obj, field, context);
  if (!v.is_string())
    throw ParseError(context + ": field '" + field + "' must be a string");
  return v.get<std::string>();
}

double require_value(const ordered_json& obj, const char* field,
                     const std::string& context) {
  return parse_number(require_string(obj, field, context),
                      context + "." + field);
}

Capacity require_capacity(const ordered_json& obj, const char* field,
                          const std::string& context) {
  std::string text = require_string(obj, field, context);
  if (text == "inf") return Capacity::unlimited();
  return Capacity::finite(parse_number(text, context + "." + field));
}

std::string capacity_to_string(const Capacity& c) {
  return c.is_unlimited() ? "inf" : format_number(c.value());
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& text, const std::string& context) {
  double value = 0.0;
  const char* begin = text.c_str();
  const char* end = begin + text.size();
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw ParseError(context + ": not a decimal number: '" + text + "'");
  return value;
}

std::string instance_to_json(const Instance& instance) {
  ordered_json root;
  root["schema_version"] = kSchemaVersion;

  ordered_json net;
  net["nodes"] = instance.network.nodes;
  ordered_json links = ordered_json::array();
  for (const Link& l : instance.network.links) {
    ordered_json jl;
    jl["tail"] = l.tail;
    jl["head"] = l.head;
    jl["capacity"] = capacity_to_string(l.capacity);
    links.push_back(std::move(jl));
  }
  net["links"] = std::move(links);
  ordered_json clouds = ordered_json::array();
  for (const CloudNode& c : instance.network.cloud_nodes) {
    ordered_json jc;
    jc["node"] = c.node;
    jc["compute_capacity"] = capacity_to_string(c.compute_capacity);
    jc["activation_power"] = format_number(c.activation_power);
    clouds.push_back(std::move(jc));
  }
  net["cloud_nodes"] = std::move(clouds);
  root["network"] = std::move(net);

  ordered_json services = ordered_json::array();
  for (const Service& s : instance.services) {
    ordered_json js;
    js["id"] = s.id;
    js["source"] = s.source;
    js["destination"] = s.destination;
    js["rate_before"] = format_number(s.rate_before);
    ordered_json chain = ordered_json::array();
    for (const Stage& st : s.chain) {
      ordered_json jst;
      jst["function"] = st.function;
      jst["rate_after"] = format_number(st.rate_after);
      ordered_json costs;
      for (const auto& [node, cost] : st.placement_cost)
        costs[node] = format_number(cost);
      jst["placement_cost"] = std::move(costs);
      chain.push_back(std::move(jst));
    }
    js["chain"] = std::move(chain);
    services.push_back(std::move(js));
  }
  root["services"] = std::move(services);
  return root.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }

  const ordered_json& version = require(root, "schema_version", "instance");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    throw ParseError("instance: unsupported schema_version " + version.dump() +
                     " (expected " + std::to_string(kSchemaVersion) + ")");
  }

  Instance instance;
  const ordered_json& net = require(root, "network", "instance");
  const ordered_json& nodes = require(net, "nodes", "network");
  if (!nodes.is_array()) throw ParseError("network: 'nodes' must be an array");
  for (const ordered_json& n : nodes) {
    if (!n.is_string()) throw ParseError("network.nodes: entries must be strings");
    instance.network.nodes.push_back(n.get<std::string>());
  }

  const ordered_json& links = require(net, "links", "network");
  if (!links.is_array()) throw ParseError("network: 'links' must be an array");
  int li = 0;
  for (const ordered_json& jl : links) {
    std::string ctx = "network.links[" + std::to_string(li++) + "]";
    Link l;
    l.tail = require_string(jl, "tail", ctx);
    l.head = require_string(jl, "head", ctx);
    l.capacity = require_capacity(jl, "capacity", ctx);
    instance.network.links.push_back(std::move(l));
  }

  const ordered_json& clouds = require(net, "cloud_nodes", "network");
  if (!clouds.is_array())
    throw ParseError("network: 'cloud_nodes' must be an array");
  int ci = 0;
  for (const ordered_json& jc : clouds) {
    std::string ctx = "network.cloud_nodes[" + std::to_string(ci++) + "]";
    CloudNode c;
    c.node = require_string(jc, "node", ctx);
    c.compute_capacity = require_capacity(jc, "compute_capacity", ctx);
    c.activation_power = require_value(jc, "activation_power", ctx);
    instance.network.cloud_nodes.push_back(std::move(c));
  }

  const ordered_json& services = require(root, "services", "instance");
  if (!services.is_array())
    throw ParseError("instance: 'services' must be an array");
  int si = 0;
  for (const ordered_json& js : services) {
    std::string ctx = "services[" + std::to_string(si++) + "]";
    Service s;
    s.id = require_string(js, "id", ctx);
    s.source = require_string(js, "source", ctx);
    s.destination = require_string(js, "destination", ctx);
    s.rate_before = require_value(js, "rate_before", ctx);
    const ordered_json& chain = require(js, "chain", ctx);
    if (!chain.is_array()) throw ParseError(ctx + ": 'chain' must be an array");
    int sti = 0;
    for (const ordered_json& jst : chain) {
      std::string sctx = ctx + ".chain[" + std::to_string(sti++) + "]";
      Stage st;
      st.function = require_string(jst, "function", sctx);
      st.rate_after = require_value(jst, "rate_after", sctx);
      const ordered_json& costs = require(jst, "placement_cost", sctx);
      if (!costs.is_object())
        throw ParseError(sctx + ": 'placement_cost' must be an object");
      for (auto it = costs.begin(); it != costs.end(); ++it) {
        if (!it.value().is_string())
          throw ParseError(sctx + ".placement_cost." + it.key() +
                           ": costs must be decimal strings");
        st.placement_cost[it.key()] = parse_number(
            it.value().get<std::string>(), sctx + ".placement_cost." + it.key());
      }
      s.chain.push_back(std::move(st));
    }
    instance.services.push_back(std::move(s));
  }
  return instance;
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << instance_to_json(instance);
  if (!out) throw ParseError("failed writing '" + path + "'");
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

}  // namespace nslice
