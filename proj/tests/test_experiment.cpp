#include <sstream>

#include "doctest.h"
#include "nslice/experiment.hpp"
#include "nslice/instance_io.hpp"

using namespace nslice;

namespace {

ExperimentConfig tiny_batch() {
  ExperimentConfig cfg;
  cfg.base.nodes = 8;
  cfg.base.cloud_count = 3;
  cfg.base.chain_length = 2;
  cfg.base.function_pool = 3;
  cfg.base.functions_per_cloud = 3;
  cfg.base.rate_min = 1;
  cfg.base.rate_max = 4;
  cfg.base.mu_min = 4;
  cfg.base.mu_max = 10;
  cfg.base.cap_min = 2;
  cfg.base.cap_max = 8;
  cfg.base.power_min = 1;
  cfg.base.power_max = 10;
  cfg.base.cost_min = 1;
  cfg.base.cost_max = 5;
  cfg.base.link_removal_prob = 0.25;
  cfg.base.common_destination = false;
  cfg.seeds = {1, 2, 3, 4};
  cfg.service_counts = {1, 2};
  cfg.algorithms = {"cbd-fp2", "direct", "lpor"};
  return cfg;
}

}  // namespace

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg = tiny_batch();
  cfg.algorithms.clear();
  CHECK_THROWS_WITH_AS(cfg.check(), "no algorithms selected",
                       std::invalid_argument);
  cfg.algorithms = {"warp-drive"};
  CHECK_THROWS_AS(cfg.check(), std::invalid_argument);
}

TEST_CASE("experiment config parses from JSON") {
  const std::string text = R"({
    "seeds": [1, 2],
    "service_counts": [3],
    "algorithms": ["cbd-fp2", "oracle"],
    "iter_max": 5,
    "generator": {"nodes": 10, "cloud_count": 3, "topology": "grid",
                  "unlimited_link_capacity": true}
  })";
  const ExperimentConfig cfg = experiment_config_from_json(text);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(cfg.iter_max == 5);
  CHECK(cfg.base.nodes == 10);
  CHECK(cfg.base.topology == Topology::Grid);
  CHECK(cfg.base.unlimited_link_capacity);
  CHECK_THROWS_AS(experiment_config_from_json("{\"seeds\": [1]}"), ParseError);
}

TEST_CASE("batch rows, aggregates, and CSV round-trip") {
  const ExperimentConfig cfg = tiny_batch();
  const std::vector<ExperimentRow> rows = run_experiment(cfg);
  REQUIRE(rows.size() == cfg.seeds.size() * cfg.service_counts.size() *
                             cfg.algorithms.size());
  for (const auto& row : rows) {
    CHECK(row.error.empty());
    if (row.algorithm == "cbd-fp2" && row.feasible)
      CHECK(row.iterations >= 1);
  }

  // Exactness inside the batch: cbd and direct agree on every instance.
  std::map<std::string, std::pair<bool, double>> cbd, direct;
  for (const auto& row : rows) {
    if (row.algorithm == "cbd-fp2")
      cbd[row.instance_id] = {row.feasible, row.objective};
    if (row.algorithm == "direct")
      direct[row.instance_id] = {row.feasible, row.objective};
  }
  for (const auto& [id, result] : cbd) {
    REQUIRE(direct.count(id));
    CHECK(result.first == direct[id].first);
    if (result.first)
      CHECK(result.second == doctest::Approx(direct[id].second).epsilon(1e-6));
  }

  // Aggregates recompute from a CSV round-trip of the raw rows.
  std::stringstream csv;
  write_rows_csv(csv, rows);
  const std::vector<ExperimentRow> parsed = read_rows_csv(csv);
  REQUIRE(parsed.size() == rows.size());
  const auto direct_agg = aggregate_rows(rows);
  const auto csv_agg = aggregate_rows(parsed);
  REQUIRE(direct_agg.size() == csv_agg.size());
  for (size_t i = 0; i < direct_agg.size(); ++i) {
    CHECK(direct_agg[i].services == csv_agg[i].services);
    CHECK(direct_agg[i].algorithm == csv_agg[i].algorithm);
    CHECK(direct_agg[i].feasible_count == csv_agg[i].feasible_count);
    CHECK(direct_agg[i].common_count == csv_agg[i].common_count);
    CHECK(direct_agg[i].avg_objective_common.has_value() ==
          csv_agg[i].avg_objective_common.has_value());
    if (direct_agg[i].avg_objective_common.has_value())
      CHECK(*direct_agg[i].avg_objective_common ==
            doctest::Approx(*csv_agg[i].avg_objective_common));
  }

  // The heuristic can never serve more instances than the exact method.
  int exact_feasible = 0, lpor_feasible = 0;
  for (const auto& agg : direct_agg) {
    if (agg.algorithm == "cbd-fp2") exact_feasible += agg.feasible_count;
    if (agg.algorithm == "lpor") lpor_feasible += agg.feasible_count;
  }
  CHECK(lpor_feasible <= exact_feasible);
}

TEST_CASE("unlimited-capacity batch solves in one iteration everywhere") {
  ExperimentConfig cfg = tiny_batch();
  cfg.base.unlimited_link_capacity = true;
  cfg.seeds = {1, 2, 3};
  cfg.algorithms = {"cbd-fp1", "cbd-fp2"};
  for (const auto& row : run_experiment(cfg)) {
    CHECK(row.error.empty());
    CHECK(row.iterations == 1);
  }
}

TEST_CASE("guard violations become error rows, not aborts") {
  ExperimentConfig cfg = tiny_batch();
  cfg.base.nodes = 24;
  cfg.base.cloud_count = 8;
  cfg.base.chain_length = 4;
  cfg.seeds = {1};
  cfg.service_counts = {6};
  cfg.algorithms = {"oracle"};
  const auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == "error");
  CHECK_FALSE(rows[0].error.empty());
}
