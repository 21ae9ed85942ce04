#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nslice/generator.hpp"

namespace nslice {

/// Batch description: one instance per (seed, service count), each solved by
/// every requested algorithm. Algorithm tokens: cbd-fp, cbd-fp1, cbd-fp2,
/// direct, lpor, lpdr, oracle, gap.
struct ExperimentConfig {
  GeneratorConfig base;
  std::vector<std::uint64_t> seeds;
  std::vector<int> service_counts;
  std::vector<std::string> algorithms;
  long iter_max = 0;  // 0 = unlimited (exact mode)
  int threads = 0;    // 0 = library default
  std::string out_prefix = "experiment";

  void check() const;  // throws on empty algorithm list or unknown tokens
};

ExperimentConfig experiment_config_from_json(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

struct ExperimentRow {
  std::string instance_id;
  std::uint64_t seed = 0;
  int services = 0, nodes = 0, links = 0, clouds = 0;
  std::string algorithm;
  std::string status;
  bool feasible = false;
  double objective = 0.0;
  int iterations = -1;  // -1 = not applicable
  int cuts = -1;
  double time_ms = 0.0;
  std::optional<double> gap_fp1, gap_fp2;
  std::string error;
};

struct AggregateRow {
  int services = 0;
  std::string algorithm;
  int instances = 0;
  int feasible_count = 0;
  int common_count = 0;  // instances feasible under every algorithm
  std::optional<double> avg_objective_common;
  std::optional<double> avg_iterations;  // over feasible runs that iterate
  double avg_time_ms = 0.0;
  std::optional<double> avg_gap_fp1, avg_gap_fp2;
};

/// Runs the batch; per-instance failures become rows with a nonempty error
/// field, never an abort. Instances run concurrently on a bounded pool; the
/// row order is independent of the schedule.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

/// Aggregates recomputable from the raw rows (and tested that way).
std::vector<AggregateRow> aggregate_rows(const std::vector<ExperimentRow>& rows);

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> read_rows_csv(std::istream& in);
void write_summary_csv(std::ostream& out,
                       const std::vector<AggregateRow>& rows);

/// Convenience wrapper: writes <prefix>_rows.csv and <prefix>_summary.csv.
void run_experiment_to_files(const ExperimentConfig& config);

}  // namespace nslice
