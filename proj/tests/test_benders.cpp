#include <set>
#include <sstream>

#include "doctest.h"
#include "nslice/benders.hpp"
#include "nslice/generator.hpp"
#include "nslice/oracle.hpp"
#include "support/toys.hpp"

using namespace nslice;

namespace {

GeneratorConfig small_config(std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.nodes = 8;
  cfg.cloud_count = 3;
  cfg.services = 2;
  cfg.chain_length = 2;
  cfg.function_pool = 3;
  cfg.functions_per_cloud = 3;
  cfg.rate_min = 1;
  cfg.rate_max = 4;
  cfg.mu_min = 4;
  cfg.mu_max = 10;
  cfg.cap_min = 2;
  cfg.cap_max = 8;
  cfg.power_min = 1;
  cfg.power_max = 10;
  cfg.cost_min = 1;
  cfg.cost_max = 5;
  cfg.link_removal_prob = 0.25;
  cfg.common_destination = false;
  return cfg;
}

}  // namespace

TEST_CASE("diamond with connectivity master iterates to the optimum") {
  const InstanceIndex idx(testing::toy_diamond());
  CbdConfig cfg;
  cfg.variant = FpVariant::FP_I;
  const CbdResult out = solve_cbd(idx, cfg);
  REQUIRE(out.status == CbdStatus::Optimal);
  CHECK(out.objective == doctest::Approx(3.0));
  CHECK(out.iterations() >= 2);
  CHECK(out.cuts.size() >= 1);
  // The final master objective is the reported objective.
  CHECK(out.trace.back().master_objective == doctest::Approx(out.objective));
  // Feasibility of the returned solution.
  CHECK(check_ns_solution(idx, out.to_solution()).ok());
}

TEST_CASE("diamond with link-capacity master converges in one iteration") {
  const InstanceIndex idx(testing::toy_diamond());
  CbdConfig cfg;
  cfg.variant = FpVariant::FP_II;
  const CbdResult out = solve_cbd(idx, cfg);
  REQUIRE(out.status == CbdStatus::Optimal);
  CHECK(out.objective == doctest::Approx(3.0));
  CHECK(out.iterations() == 1);
  CHECK(out.cuts.empty());
}

TEST_CASE("unlimited link capacity terminates in a single iteration") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    GeneratorConfig gen = small_config(seed);
    gen.unlimited_link_capacity = true;
    const InstanceIndex idx(generate(gen));
    for (FpVariant variant : {FpVariant::FP_I, FpVariant::FP_II}) {
      CbdConfig cfg;
      cfg.variant = variant;
      const CbdResult out = solve_cbd(idx, cfg);
      CHECK(out.iterations() == 1);
      CHECK((out.status == CbdStatus::Optimal ||
             out.status == CbdStatus::Infeasible));
    }
  }
}

TEST_CASE("decomposition agrees with brute force on guarded instances") {
  int optimal = 0, infeasible = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const InstanceIndex idx(generate(small_config(seed)));
    const OracleResult truth = brute_force_ns(idx);
    for (FpVariant variant :
         {FpVariant::FP, FpVariant::FP_I, FpVariant::FP_II}) {
      CbdConfig cfg;
      cfg.variant = variant;
      const CbdResult out = solve_cbd(idx, cfg);
      if (truth.feasible) {
        REQUIRE(out.status == CbdStatus::Optimal);
        CHECK(out.objective == doctest::Approx(truth.objective).epsilon(1e-6));
        CHECK(check_ns_solution(idx, out.to_solution()).ok());
      } else {
        REQUIRE(out.status == CbdStatus::Infeasible);
      }
    }
    truth.feasible ? ++optimal : ++infeasible;
  }
  // The batch must exercise both outcomes to mean anything.
  CHECK(optimal >= 5);
  CHECK(infeasible >= 5);
}

TEST_CASE("master objectives are nondecreasing and placements never repeat") {
  for (std::uint64_t seed = 31; seed <= 45; ++seed) {
    const InstanceIndex idx(generate(small_config(seed)));
    CbdConfig cfg;
    cfg.variant = FpVariant::FP;  // weakest master: the most iterations
    const CbdResult out = solve_cbd(idx, cfg);

    std::set<Placement> seen;
    double last_obj = -1.0;
    for (const auto& rec : out.trace) {
      if (!rec.master_feasible) break;
      CHECK(rec.master_objective >= last_obj - 1e-9);
      last_obj = rec.master_objective;
      CHECK(seen.insert(rec.placement).second);  // cut-off property
    }
    // Every recorded cut separates the placement that produced it.
    for (const auto& cut : out.cuts) {
      const auto& rec = out.trace[cut.iteration - 1];
      CHECK(cut.lhs_at(rec.placement) < -1e-6);
    }
  }
}

TEST_CASE("iteration budget reports no feasible solution") {
  const InstanceIndex idx(testing::toy_diamond());
  CbdConfig cfg;
  cfg.variant = FpVariant::FP_I;
  cfg.iter_max = 1;
  const CbdResult out = solve_cbd(idx, cfg);
  CHECK(out.status == CbdStatus::IterLimit);
  CHECK(out.placement.empty());
  CHECK(out.iterations() == 1);

  cfg.iter_max = 0;
  CHECK_THROWS_AS(solve_cbd(idx, cfg), std::invalid_argument);
}

TEST_CASE("master infeasibility proves the whole problem infeasible") {
  // The only function is processable nowhere near the destination: the
  // connectivity-strengthened master has no placement at all.
  Instance ins = testing::toy_diamond();
  ins.services[0].chain[0].placement_cost.clear();
  ins.services[0].chain[0].placement_cost["B"] = 0.0;
  ins.network.links[2].capacity = Capacity::finite(0.0);  // B -> D dead
  const InstanceIndex idx(ins);
  CbdConfig cfg;
  cfg.variant = FpVariant::FP_II;
  const CbdResult out = solve_cbd(idx, cfg);
  CHECK(out.status == CbdStatus::Infeasible);
  CHECK_FALSE(brute_force_ns(idx).feasible);
}

TEST_CASE("gap improvement on the diamond") {
  const InstanceIndex idx(testing::toy_diamond());
  const GapImprovement gap = gap_improvement(idx);
  REQUIRE(gap.fp_i.has_value());
  REQUIRE(gap.fp_ii.has_value());
  CHECK(*gap.fp_i == doctest::Approx(0.0));
  CHECK(*gap.fp_ii == doctest::Approx(1.0));
}

TEST_CASE("gap improvement is undefined when the master is already exact") {
  // Unlimited everything: the bare master equals the true optimum.
  GeneratorConfig gen = small_config(3);
  gen.unlimited_link_capacity = true;
  gen.mu_min = 1000;
  gen.mu_max = 1000;
  gen.link_removal_prob = 0.0;
  gen.topology = Topology::Grid;
  const InstanceIndex idx(generate(gen));
  const GapImprovement gap = gap_improvement(idx);
  CHECK_FALSE(gap.fp_i.has_value());
  CHECK_FALSE(gap.fp_ii.has_value());
}

TEST_CASE("gap improvements are ordered on random instances") {
  int defined = 0;
  for (std::uint64_t seed = 50; seed <= 75; ++seed) {
    GeneratorConfig gen = small_config(seed);
    gen.cap_min = 1;  // thin links so routing limits actually bind
    gen.cap_max = 4;
    const InstanceIndex idx(generate(gen));
    const GapImprovement gap = gap_improvement(idx);
    if (!gap.fp_i || !gap.fp_ii) continue;
    ++defined;
    CHECK(*gap.fp_i >= 0.0);
    CHECK(*gap.fp_ii >= *gap.fp_i - 1e-9);
    CHECK(*gap.fp_ii <= 1.0);
  }
  CHECK(defined >= 3);
}

TEST_CASE("iteration trace exports as CSV") {
  const InstanceIndex idx(testing::toy_diamond());
  CbdConfig cfg;
  cfg.variant = FpVariant::FP_I;
  const CbdResult out = solve_cbd(idx, cfg);
  std::ostringstream os;
  write_trace_csv(os, out);
  const std::string text = os.str();
  CHECK(text.find("iteration,master_obj,tr_status,cut_nnz,cum_time_ms") == 0);
  // Header plus one line per iteration.
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        1 + static_cast<long>(out.trace.size()));
}
