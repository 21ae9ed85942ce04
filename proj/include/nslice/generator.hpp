#pragma once

#include <cstdint>

#include "nslice/instance.hpp"

namespace nslice {

enum class Topology { Grid, Geometric };

enum class RateMode {
  // One integer rate per service, shared by every flow of that service.
  UniformPerService,
  // Independent integer rate per flow (before the chain and after each stage).
  PerStage,
};

/// Synthetic-instance parameters. The defaults mirror the experimental setup
/// this solver targets: links dropped with probability 0.1, compute capacity
/// in [200,600], link capacity in [20,220], 4-function chains drawn from a
/// pool of 5 functions, integer rates in [1,40], activation power in [1,200],
/// and placement power in [1,20].
struct GeneratorConfig {
  std::uint64_t seed = 1;

  int nodes = 20;
  Topology topology = Topology::Geometric;
  // 0 = pick automatically from the node count.
  double geometric_radius = 0.0;
  double link_removal_prob = 0.1;

  int cloud_count = 4;
  double mu_min = 200.0, mu_max = 600.0;
  double cap_min = 20.0, cap_max = 220.0;
  bool unlimited_link_capacity = false;

  int services = 10;
  int chain_length = 4;
  int function_pool = 5;
  int functions_per_cloud = 3;
  RateMode rate_mode = RateMode::UniformPerService;
  int rate_min = 1, rate_max = 40;
  double power_min = 1.0, power_max = 200.0;
  double cost_min = 1.0, cost_max = 20.0;
  bool common_destination = true;
};

/// Deterministic for a fixed config; the result always validates.
/// Throws std::invalid_argument on inconsistent configs (empty ranges,
/// probabilities outside [0,1], chains longer than the function pool, or
/// too few nodes to host the cloud set plus endpoints).
Instance generate(const GeneratorConfig& config);

}  // namespace nslice
