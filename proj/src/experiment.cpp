#include "nslice/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nslice/baselines.hpp"
#include "nslice/benders.hpp"
#include "nslice/instance_io.hpp"
#include "nslice/oracle.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nslice {

namespace {

const std::set<std::string> kKnownAlgorithms = {
    "cbd-fp", "cbd-fp1", "cbd-fp2", "direct", "lpor", "lpdr", "oracle", "gap"};

ExperimentRow run_algorithm(const InstanceIndex& idx, const std::string& alg,
                            long iter_max) {
  ExperimentRow row;
  row.algorithm = alg;
  if (alg.rfind("cbd-", 0) == 0) {
    CbdConfig cfg;
    cfg.iter_max = iter_max > 0 ? iter_max : kUnlimitedIterations;
    cfg.variant = alg == "cbd-fp"    ? FpVariant::FP
                  : alg == "cbd-fp1" ? FpVariant::FP_I
                                     : FpVariant::FP_II;
    const CbdResult out = solve_cbd(idx, cfg);
    row.status = to_string(out.status);
    row.feasible = out.status == CbdStatus::Optimal;
    row.objective = out.objective;
    row.iterations = out.iterations();
    row.cuts = static_cast<int>(out.cuts.size());
    row.time_ms = out.total_time_ms;
  } else if (alg == "direct") {
    const BaselineResult out = solve_direct(idx);
    row.status = to_string(out.status);
    row.feasible = out.status == BaselineStatus::Feasible;
    row.objective = out.objective;
    row.time_ms = out.time_ms;
  } else if (alg == "lpor" || alg == "lpdr") {
    const BaselineResult out = alg == "lpor"
                                   ? solve_lp_one_shot_rounding(idx)
                                   : solve_lp_dynamic_rounding(idx);
    row.status = to_string(out.status);
    row.feasible = out.status == BaselineStatus::Feasible;
    row.objective = out.objective;
    row.time_ms = out.time_ms;
  } else if (alg == "oracle") {
    const OracleResult out = brute_force_ns(idx);
    row.status = out.feasible ? "optimal" : "infeasible";
    row.feasible = out.feasible;
    row.objective = out.objective;
  } else if (alg == "gap") {
    const GapImprovement gap = gap_improvement(idx);
    row.status = gap.fp_i || gap.fp_ii ? "defined" : "undefined";
    row.feasible = false;
    row.gap_fp1 = gap.fp_i;
    row.gap_fp2 = gap.fp_ii;
  }
  return row;
}

std::string opt_to_string(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace

void ExperimentConfig::check() const {
  if (algorithms.empty())
    throw std::invalid_argument("no algorithms selected");
  for (const auto& alg : algorithms)
    if (!kKnownAlgorithms.count(alg))
      throw std::invalid_argument("unknown algorithm '" + alg + "'");
  if (seeds.empty()) throw std::invalid_argument("no seeds selected");
  if (service_counts.empty())
    throw std::invalid_argument("no service counts selected");
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  ExperimentConfig cfg;
  if (!root.contains("seeds") || !root["seeds"].is_array())
    throw ParseError("experiment config: missing field 'seeds'");
  for (const auto& s : root["seeds"]) cfg.seeds.push_back(s.get<std::uint64_t>());
  if (!root.contains("service_counts") || !root["service_counts"].is_array())
    throw ParseError("experiment config: missing field 'service_counts'");
  for (const auto& s : root["service_counts"])
    cfg.service_counts.push_back(s.get<int>());
  if (!root.contains("algorithms") || !root["algorithms"].is_array())
    throw ParseError("experiment config: missing field 'algorithms'");
  for (const auto& a : root["algorithms"])
    cfg.algorithms.push_back(a.get<std::string>());
  cfg.iter_max = root.value("iter_max", 0L);
  cfg.threads = root.value("threads", 0);
  cfg.out_prefix = root.value("out_prefix", std::string("experiment"));

  if (root.contains("generator")) {
    const auto& g = root["generator"];
    GeneratorConfig& b = cfg.base;
    b.nodes = g.value("nodes", b.nodes);
    b.cloud_count = g.value("cloud_count", b.cloud_count);
    b.chain_length = g.value("chain_length", b.chain_length);
    b.function_pool = g.value("function_pool", b.function_pool);
    b.functions_per_cloud = g.value("functions_per_cloud", b.functions_per_cloud);
    b.link_removal_prob = g.value("link_removal_prob", b.link_removal_prob);
    b.unlimited_link_capacity =
        g.value("unlimited_link_capacity", b.unlimited_link_capacity);
    b.mu_min = g.value("mu_min", b.mu_min);
    b.mu_max = g.value("mu_max", b.mu_max);
    b.cap_min = g.value("cap_min", b.cap_min);
    b.cap_max = g.value("cap_max", b.cap_max);
    b.rate_min = g.value("rate_min", b.rate_min);
    b.rate_max = g.value("rate_max", b.rate_max);
    b.power_min = g.value("power_min", b.power_min);
    b.power_max = g.value("power_max", b.power_max);
    b.cost_min = g.value("cost_min", b.cost_min);
    b.cost_max = g.value("cost_max", b.cost_max);
    b.common_destination = g.value("common_destination", b.common_destination);
    if (g.contains("topology"))
      b.topology = g["topology"].get<std::string>() == "grid"
                       ? Topology::Grid
                       : Topology::Geometric;
    if (g.contains("rate_mode"))
      b.rate_mode = g["rate_mode"].get<std::string>() == "per_stage"
                        ? RateMode::PerStage
                        : RateMode::UniformPerService;
  }
  cfg.check();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return experiment_config_from_json(buf.str());
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  config.check();

  struct Task {
    std::uint64_t seed;
    int services;
  };
  std::vector<Task> tasks;
  for (int count : config.service_counts)
    for (std::uint64_t seed : config.seeds) tasks.push_back({seed, count});

  const int n_algs = static_cast<int>(config.algorithms.size());
  std::vector<ExperimentRow> rows(tasks.size() * n_algs);

  int threads = config.threads;
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#else
  threads = 1;
#endif

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (size_t t = 0; t < tasks.size(); ++t) {
    GeneratorConfig gen = config.base;
    gen.seed = tasks[t].seed;
    gen.services = tasks[t].services;
    std::ostringstream id;
    id << "n" << gen.nodes << "_k" << gen.services << "_s" << gen.seed;

    for (int a = 0; a < n_algs; ++a) {
      ExperimentRow& row = rows[t * n_algs + a];
      row.instance_id = id.str();
      row.seed = tasks[t].seed;
      row.services = tasks[t].services;
      row.algorithm = config.algorithms[a];
      try {
        const Instance instance = generate(gen);
        const InstanceIndex idx(instance);
        row.nodes = idx.node_count();
        row.links = idx.link_count();
        row.clouds = idx.cloud_count();
        ExperimentRow result =
            run_algorithm(idx, config.algorithms[a], config.iter_max);
        result.instance_id = row.instance_id;
        result.seed = row.seed;
        result.services = row.services;
        result.nodes = row.nodes;
        result.links = row.links;
        result.clouds = row.clouds;
        row = std::move(result);
      } catch (const std::exception& e) {
        row.status = "error";
        row.error = e.what();
      }
    }
  }
  return rows;
}

std::vector<AggregateRow> aggregate_rows(
    const std::vector<ExperimentRow>& rows) {
  // Instances where every non-analysis algorithm reported feasible.
  std::map<std::string, bool> common;
  std::set<std::string> algorithms;
  for (const auto& row : rows) {
    if (row.algorithm == "gap") continue;
    algorithms.insert(row.algorithm);
    auto [it, inserted] = common.try_emplace(row.instance_id, true);
    it->second = it->second && row.feasible;
  }

  std::map<std::pair<int, std::string>, AggregateRow> groups;
  for (const auto& row : rows) {
    AggregateRow& agg = groups[{row.services, row.algorithm}];
    agg.services = row.services;
    agg.algorithm = row.algorithm;
    ++agg.instances;
    agg.avg_time_ms += row.time_ms;
    if (row.feasible) ++agg.feasible_count;
  }

  std::map<std::pair<int, std::string>, std::pair<double, int>> obj_common;
  std::map<std::pair<int, std::string>, std::pair<double, int>> iter_sum;
  std::map<std::pair<int, std::string>, std::pair<double, int>> gap1, gap2;
  for (const auto& row : rows) {
    const auto key = std::make_pair(row.services, row.algorithm);
    if (row.feasible && common.count(row.instance_id) &&
        common.at(row.instance_id)) {
      obj_common[key].first += row.objective;
      obj_common[key].second += 1;
    }
    if (row.feasible && row.iterations >= 0) {
      iter_sum[key].first += row.iterations;
      iter_sum[key].second += 1;
    }
    if (row.gap_fp1) {
      gap1[key].first += *row.gap_fp1;
      gap1[key].second += 1;
    }
    if (row.gap_fp2) {
      gap2[key].first += *row.gap_fp2;
      gap2[key].second += 1;
    }
  }

  std::vector<AggregateRow> result;
  for (auto& [key, agg] : groups) {
    agg.avg_time_ms /= std::max(1, agg.instances);
    if (const auto it = obj_common.find(key); it != obj_common.end()) {
      agg.common_count = it->second.second;
      if (it->second.second > 0)
        agg.avg_objective_common = it->second.first / it->second.second;
    }
    if (const auto it = iter_sum.find(key);
        it != iter_sum.end() && it->second.second > 0)
      agg.avg_iterations = it->second.first / it->second.second;
    if (const auto it = gap1.find(key);
        it != gap1.end() && it->second.second > 0)
      agg.avg_gap_fp1 = it->second.first / it->second.second;
    if (const auto it = gap2.find(key);
        it != gap2.end() && it->second.second > 0)
      agg.avg_gap_fp2 = it->second.first / it->second.second;
    result.push_back(agg);
  }
  return result;
}

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "instance_id,seed,services,nodes,links,clouds,algorithm,status,"
         "feasible,objective,iterations,cuts,time_ms,gap_fp1,gap_fp2,error\n";
  for (const auto& r : rows) {
    out << r.instance_id << "," << r.seed << "," << r.services << ","
        << r.nodes << "," << r.links << "," << r.clouds << "," << r.algorithm
        << "," << r.status << "," << (r.feasible ? 1 : 0) << ","
        << (r.feasible ? format_number(r.objective) : std::string()) << ","
        << (r.iterations >= 0 ? std::to_string(r.iterations) : std::string())
        << "," << (r.cuts >= 0 ? std::to_string(r.cuts) : std::string())
        << "," << format_number(r.time_ms) << "," << opt_to_string(r.gap_fp1)
        << "," << opt_to_string(r.gap_fp2) << "," << r.error << "\n";
  }
}

std::vector<ExperimentRow> read_rows_csv(std::istream& in) {
  std::vector<ExperimentRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    fields.resize(16);
    ExperimentRow r;
    r.instance_id = fields[0];
    r.seed = std::stoull(fields[1]);
    r.services = std::stoi(fields[2]);
    r.nodes = std::stoi(fields[3]);
    r.links = std::stoi(fields[4]);
    r.clouds = std::stoi(fields[5]);
    r.algorithm = fields[6];
    r.status = fields[7];
    r.feasible = fields[8] == "1";
    if (!fields[9].empty()) r.objective = parse_number(fields[9], "csv");
    if (!fields[10].empty()) r.iterations = std::stoi(fields[10]);
    if (!fields[11].empty()) r.cuts = std::stoi(fields[11]);
    if (!fields[12].empty()) r.time_ms = parse_number(fields[12], "csv");
    if (!fields[13].empty()) r.gap_fp1 = parse_number(fields[13], "csv");
    if (!fields[14].empty()) r.gap_fp2 = parse_number(fields[14], "csv");
    r.error = fields[15];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_summary_csv(std::ostream& out,
                       const std::vector<AggregateRow>& rows) {
  out << "services,algorithm,instances,feasible,common_count,"
         "avg_objective_common,avg_iterations,avg_time_ms,avg_gap_fp1,"
         "avg_gap_fp2\n";
  for (const auto& r : rows) {
    out << r.services << "," << r.algorithm << "," << r.instances << ","
        << r.feasible_count << "," << r.common_count << ","
        << opt_to_string(r.avg_objective_common) << ","
        << opt_to_string(r.avg_iterations) << "," << format_number(r.avg_time_ms)
        << "," << opt_to_string(r.avg_gap_fp1) << ","
        << opt_to_string(r.avg_gap_fp2) << "\n";
  }
}

void run_experiment_to_files(const ExperimentConfig& config) {
  const std::vector<ExperimentRow> rows = run_experiment(config);
  {
    std::ofstream out(config.out_prefix + "_rows.csv", std::ios::binary);
    if (!out)
      throw ParseError("cannot write '" + config.out_prefix + "_rows.csv'");
    write_rows_csv(out, rows);
  }
  {
    std::ofstream out(config.out_prefix + "_summary.csv", std::ios::binary);
    if (!out)
      throw ParseError("cannot write '" + config.out_prefix + "_summary.csv'");
    write_summary_csv(out, aggregate_rows(rows));
  }
}

}  // namespace nslice
