#include "doctest.h"
#include "nslice/baselines.hpp"
#include "nslice/benders.hpp"
#include "nslice/generator.hpp"
#include "nslice/instance_io.hpp"
#include "nslice/oracle.hpp"
#include "support/toys.hpp"

using namespace nslice;

namespace {

GeneratorConfig batch_config(std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.nodes = 8;
  cfg.cloud_count = 3;
  cfg.services = 3;
  cfg.chain_length = 2;
  cfg.function_pool = 3;
  cfg.functions_per_cloud = 3;
  cfg.rate_min = 1;
  cfg.rate_max = 3;
  cfg.mu_min = 5;
  cfg.mu_max = 12;
  cfg.cap_min = 2;
  cfg.cap_max = 8;
  cfg.power_min = 1;
  cfg.power_max = 10;
  cfg.cost_min = 1;
  cfg.cost_max = 5;
  cfg.link_removal_prob = 0.2;
  cfg.common_destination = false;
  return cfg;
}

}  // namespace

TEST_CASE("direct solve finds the optima of both toys") {
  {
    const InstanceIndex idx(testing::toy_diamond());
    const BaselineResult out = solve_direct(idx);
    REQUIRE(out.status == BaselineStatus::Feasible);
    CHECK(out.objective == doctest::Approx(3.0));
    CHECK(check_ns_solution(idx, out.to_solution()).ok());
  }
  {
    const InstanceIndex idx(testing::toy_chain());
    const BaselineResult out = solve_direct(idx);
    REQUIRE(out.status == BaselineStatus::Feasible);
    CHECK(out.objective == doctest::Approx(1.0));
    CHECK(check_ns_solution(idx, out.to_solution()).ok());
  }
}

TEST_CASE("direct solve reports aggregate capacity overload as infeasible") {
  Instance ins = testing::toy_diamond();
  for (auto& svc : ins.services) {
    svc.rate_before = 10.0;  // total demand 20 > total compute 4
    svc.chain[0].rate_after = 10.0;
  }
  const InstanceIndex idx(ins);
  CHECK(solve_direct(idx).status == BaselineStatus::InfeasibleOrFailed);
}

TEST_CASE("one-shot rounding is exact when the relaxation is integral") {
  // Single viable host: the relaxation is trivially integral.
  Instance ins;
  ins.network.nodes = {"S", "m", "D"};
  ins.network.links.push_back({"S", "m", Capacity::finite(10.0)});
  ins.network.links.push_back({"m", "D", Capacity::finite(10.0)});
  ins.network.cloud_nodes.push_back({"m", Capacity::finite(10.0), 5.0});
  Service s;
  s.id = "svc";
  s.source = "S";
  s.destination = "D";
  s.rate_before = 2.0;
  Stage st;
  st.function = "f";
  st.rate_after = 2.0;
  st.placement_cost = {{"m", 1.0}};
  s.chain = {st};
  ins.services.push_back(s);
  const InstanceIndex idx(ins);

  const BaselineResult direct = solve_direct(idx);
  for (const BaselineResult& out :
       {solve_lp_one_shot_rounding(idx), solve_lp_dynamic_rounding(idx)}) {
    REQUIRE(out.status == BaselineStatus::Feasible);
    CHECK(out.objective == doctest::Approx(direct.objective));
  }
}

TEST_CASE("rounding never beats the true optimum on the diamond") {
  const InstanceIndex idx(testing::toy_diamond());
  for (const BaselineResult& out :
       {solve_lp_one_shot_rounding(idx), solve_lp_dynamic_rounding(idx)}) {
    if (out.status == BaselineStatus::Feasible) {
      CHECK(out.objective >= 3.0 - 1e-9);
      CHECK(check_ns_solution(idx, out.to_solution()).ok());
    }
  }
}

TEST_CASE("baseline batch: soundness against the exact methods") {
  int cbd_feasible = 0, lpor_feasible = 0, lpdr_feasible = 0;
  double cbd_obj = 0.0, lpor_obj = 0.0, lpdr_obj = 0.0;
  int common = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const InstanceIndex idx(generate(batch_config(seed)));
    const CbdResult exact = solve_cbd(idx);
    const BaselineResult direct = solve_direct(idx);
    const BaselineResult lpor = solve_lp_one_shot_rounding(idx);
    const BaselineResult lpdr = solve_lp_dynamic_rounding(idx);

    // Exactness cross-check: two independent exact code paths agree.
    if (exact.status == CbdStatus::Optimal) {
      ++cbd_feasible;
      REQUIRE(direct.status == BaselineStatus::Feasible);
      CHECK(direct.objective ==
            doctest::Approx(exact.objective).epsilon(1e-6));
    } else {
      CHECK(direct.status == BaselineStatus::InfeasibleOrFailed);
    }

    for (const BaselineResult* out : {&direct, &lpor, &lpdr}) {
      if (out->status == BaselineStatus::Feasible) {
        CHECK(check_ns_solution(idx, out->to_solution()).ok());
        if (exact.status == CbdStatus::Optimal)
          CHECK(out->objective >= exact.objective - 1e-6);
      }
    }
    if (lpor.status == BaselineStatus::Feasible) ++lpor_feasible;
    if (lpdr.status == BaselineStatus::Feasible) ++lpdr_feasible;

    if (exact.status == CbdStatus::Optimal &&
        lpor.status == BaselineStatus::Feasible &&
        lpdr.status == BaselineStatus::Feasible) {
      ++common;
      cbd_obj += exact.objective;
      lpor_obj += lpor.objective;
      lpdr_obj += lpdr.objective;
    }
  }
  // Heuristics cannot find more routable instances than the exact method.
  CHECK(lpor_feasible <= cbd_feasible);
  CHECK(lpdr_feasible <= cbd_feasible);
  REQUIRE(common >= 3);
  CHECK(lpor_obj >= cbd_obj - 1e-6);
  CHECK(lpdr_obj >= cbd_obj - 1e-6);
}

TEST_CASE("verifier rejects tampered solutions") {
  const InstanceIndex idx(testing::toy_diamond());
  const BaselineResult out = solve_direct(idx);
  REQUIRE(out.status == BaselineStatus::Feasible);
  Solution sol = out.to_solution();
  REQUIRE(check_ns_solution(idx, sol).ok());

  SUBCASE("missing activation") {
    sol.activated.clear();
    CHECK_FALSE(check_ns_solution(idx, sol).ok());
  }
  SUBCASE("wrong objective") {
    sol.objective += 1.0;
    CHECK_FALSE(check_ns_solution(idx, sol).ok());
  }
  SUBCASE("dropped flows break conservation") {
    sol.flows.clear();
    CHECK_FALSE(check_ns_solution(idx, sol).ok());
  }
  SUBCASE("overloaded link") {
    for (auto& f : sol.flows) f.value *= 3.0;
    CHECK_FALSE(check_ns_solution(idx, sol).ok());
  }
}

TEST_CASE("solution files round-trip") {
  const InstanceIndex idx(testing::toy_diamond());
  const CbdResult out = solve_cbd(idx);
  REQUIRE(out.status == CbdStatus::Optimal);
  const Solution sol = out.to_solution();
  const std::string text = solution_to_json(idx, sol);
  const Solution back = solution_from_json(idx, text);
  CHECK(back.objective == sol.objective);
  CHECK(back.placement == sol.placement);
  CHECK(back.activated == sol.activated);
  REQUIRE(back.flows.size() == sol.flows.size());
  CHECK(check_ns_solution(idx, back).ok());
  CHECK_THROWS_AS(solution_from_json(idx, "{}"), ParseError);
}
