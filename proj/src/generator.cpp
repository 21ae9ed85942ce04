#include "nslice/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace nslice {

namespace {

// Distribution helpers on raw mt19937_64 draws. <random> distributions are
// implementation-defined, which would break the byte-identical-output
// guarantee across standard libraries.
int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

// Integer-valued draw from [lo, hi]; capacities and powers are integral.
double uniform_amount(std::mt19937_64& rng, double lo, double hi) {
  return static_cast<double>(
      uniform_int(rng, static_cast<int>(lo), static_cast<int>(hi)));
}

std::vector<int> sample_without_replacement(std::mt19937_64& rng, int count,
                                            int universe) {
  std::vector<int> pool(universe);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < count; ++i) {
    const int j = uniform_int(rng, i, universe - 1);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

void check_config(const GeneratorConfig& c) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("generator config: " + msg);
  };
  if (c.nodes < 1) fail("node count must be >= 1");
  if (c.cloud_count < 0 || c.cloud_count > c.nodes)
    fail("cloud count out of range");
  if (c.services < 0) fail("service count must be >= 0");
  if (c.services > 0 && c.nodes - c.cloud_count < 2)
    fail("need at least two non-cloud nodes for service endpoints");
  if (c.chain_length < 1) fail("chain length must be >= 1");
  if (c.function_pool < 1) fail("function pool must be >= 1");
  if (c.chain_length > c.function_pool)
    fail("chain requests more distinct functions than the pool provides");
  if (c.functions_per_cloud < 0 || c.functions_per_cloud > c.function_pool)
    fail("functions per cloud out of range");
  if (c.link_removal_prob < 0.0 || c.link_removal_prob > 1.0)
    fail("link removal probability must be in [0,1]");
  if (c.mu_min > c.mu_max || c.mu_min < 0) fail("bad compute capacity range");
  if (c.cap_min > c.cap_max || c.cap_min < 0) fail("bad link capacity range");
  if (c.rate_min > c.rate_max || c.rate_min < 1) fail("bad rate range");
  if (c.power_min > c.power_max || c.power_min < 0) fail("bad power range");
  if (c.cost_min > c.cost_max || c.cost_min < 0) fail("bad cost range");
  if (c.geometric_radius < 0) fail("geometric radius must be >= 0");
}

std::vector<std::pair<int, int>> topology_edges(const GeneratorConfig& c,
                                                std::mt19937_64& rng) {
  // Undirected neighbor pairs; each direction is materialized (and possibly
  // removed) independently by the caller.
  std::vector<std::pair<int, int>> edges;
  if (c.topology == Topology::Grid) {
    const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(
                                      static_cast<double>(c.nodes)))));
    for (int v = 0; v < c.nodes; ++v) {
      const int r = v / cols, col = v % cols;
      if (col + 1 < cols && v + 1 < c.nodes) edges.push_back({v, v + 1});
      if ((r + 1) * cols + col < c.nodes) edges.push_back({v, v + cols});
    }
  } else {
    double radius = c.geometric_radius;
    if (radius == 0.0) {
      const double n = static_cast<double>(std::max(2, c.nodes));
      radius = std::sqrt(2.5 * std::log(n) / (3.14159265358979323846 * n));
    }
    std::vector<double> px(c.nodes), py(c.nodes);
    for (int v = 0; v < c.nodes; ++v) {
      px[v] = uniform_real(rng, 0.0, 1.0);
      py[v] = uniform_real(rng, 0.0, 1.0);
    }
    for (int u = 0; u < c.nodes; ++u)
      for (int v = u + 1; v < c.nodes; ++v) {
        const double dx = px[u] - px[v], dy = py[u] - py[v];
        if (dx * dx + dy * dy <= radius * radius) edges.push_back({u, v});
      }
  }
  return edges;
}

}  // namespace

Instance generate(const GeneratorConfig& config) {
  check_config(config);
  std::mt19937_64 rng(config.seed);

  Instance instance;
  Network& net = instance.network;
  for (int v = 0; v < config.nodes; ++v)
    net.nodes.push_back("n" + std::to_string(v));

  const auto edges = topology_edges(config, rng);
  for (const auto& [u, v] : edges) {
    for (const auto& [tail, head] : {std::pair{u, v}, std::pair{v, u}}) {
      if (uniform_real(rng, 0.0, 1.0) < config.link_removal_prob) continue;
      Link l;
      l.tail = net.nodes[tail];
      l.head = net.nodes[head];
      l.capacity = config.unlimited_link_capacity
                       ? Capacity::unlimited()
                       : Capacity::finite(uniform_amount(rng, config.cap_min,
                                                         config.cap_max));
      net.links.push_back(std::move(l));
    }
  }

  const std::vector<int> cloud_ids =
      sample_without_replacement(rng, config.cloud_count, config.nodes);
  std::vector<bool> is_cloud(config.nodes, false);
  std::vector<std::vector<int>> cloud_functions;
  for (int id : cloud_ids) {
    is_cloud[id] = true;
    CloudNode c;
    c.node = net.nodes[id];
    c.compute_capacity =
        Capacity::finite(uniform_amount(rng, config.mu_min, config.mu_max));
    c.activation_power = uniform_amount(rng, config.power_min, config.power_max);
    net.cloud_nodes.push_back(std::move(c));
    std::vector<int> fns = sample_without_replacement(
        rng, config.functions_per_cloud, config.function_pool);
    std::sort(fns.begin(), fns.end());
    cloud_functions.push_back(std::move(fns));
  }

  std::vector<int> endpoints;
  for (int v = 0; v < config.nodes; ++v)
    if (!is_cloud[v]) endpoints.push_back(v);

  int common_dest = -1;
  if (config.services > 0 && config.common_destination)
    common_dest = endpoints[uniform_int(
        rng, 0, static_cast<int>(endpoints.size()) - 1)];

  for (int k = 0; k < config.services; ++k) {
    Service s;
    s.id = "s" + std::to_string(k);
    int dest = common_dest;
    if (dest < 0)
      dest = endpoints[uniform_int(rng, 0,
                                   static_cast<int>(endpoints.size()) - 1)];
    int src = dest;
    while (src == dest && endpoints.size() > 1)
      src = endpoints[uniform_int(rng, 0,
                                  static_cast<int>(endpoints.size()) - 1)];
    s.source = net.nodes[src];
    s.destination = net.nodes[dest];

    const std::vector<int> fns = sample_without_replacement(
        rng, config.chain_length, config.function_pool);
    const double service_rate =
        static_cast<double>(uniform_int(rng, config.rate_min, config.rate_max));
    s.rate_before = config.rate_mode == RateMode::UniformPerService
                        ? service_rate
                        : static_cast<double>(uniform_int(rng, config.rate_min,
                                                          config.rate_max));
    for (int fn : fns) {
      Stage st;
      st.function = "f" + std::to_string(fn + 1);
      st.rate_after =
          config.rate_mode == RateMode::UniformPerService
              ? service_rate
              : static_cast<double>(
                    uniform_int(rng, config.rate_min, config.rate_max));
      for (int c = 0; c < config.cloud_count; ++c) {
        if (!std::binary_search(cloud_functions[c].begin(),
                                cloud_functions[c].end(), fn))
          continue;
        st.placement_cost[net.cloud_nodes[c].node] =
            uniform_amount(rng, config.cost_min, config.cost_max);
      }
      s.chain.push_back(std::move(st));
    }
    instance.services.push_back(std::move(s));
  }
  return instance;
}

}  // namespace nslice
