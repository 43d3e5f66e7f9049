// d2dsim command-line harness: fit / cluster / simulate / tail subcommands.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "d2dsim/config.hpp"
#include "d2dsim/errors.hpp"
#include "d2dsim/io.hpp"
#include "d2dsim/log.hpp"
#include "d2dsim/offload.hpp"
#include "d2dsim/social.hpp"
#include "d2dsim/tail.hpp"
#include "d2dsim/trace.hpp"

namespace {

struct FitArgs {
  std::string trace_path;
  double x_min = 0.0;
  std::size_t n_min = 2;
  std::string out;
};

struct ClusterArgs {
  std::string graph_path;
  double w_threshold = 0.5;
  std::string out;
};

struct SimulateArgs {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed_override;
  std::string sweep_param;
  std::vector<double> sweep_values;
  std::size_t reps = 20;
  std::string decisions_out;
  std::string topology_out;
  std::string selections_out;
};

struct TailArgs {
  double alpha = 20.0;
  std::size_t n = 4;
  std::size_t n_samples = 10000;
  std::uint64_t seed = 1;
  std::string out;
};

int run_fit(const FitArgs& args) {
  const auto records = d2dsim::parse_trace_file(args.trace_path);
  const auto stats = d2dsim::aggregate_contacts(records);
  const auto graph =
      d2dsim::build_closeness_graph(stats, args.x_min, args.n_min);
  d2dsim::write_graph_csv(args.out, graph);
  d2dsim::log_info("fit: wrote " + std::to_string(graph.edges.size()) +
                   " edges to " + args.out);
  return 0;
}

int run_cluster(const ClusterArgs& args) {
  if (args.w_threshold < 0.0 || args.w_threshold > 1.0)
    throw d2dsim::ConfigError("w-t: must be in [0,1]");
  const auto graph = d2dsim::read_graph_csv(args.graph_path);
  const auto partition = d2dsim::build_offsn(graph, args.w_threshold);
  d2dsim::write_partition_json(args.out, partition);
  d2dsim::log_info("cluster: " + std::to_string(partition.clusters.size()) +
                   " clusters, " + std::to_string(partition.white_nodes.size()) +
                   " white nodes");
  return 0;
}

int run_simulate(const SimulateArgs& args) {
  d2dsim::SimConfig config = d2dsim::load_config(args.config_path);
  if (args.seed_override) config.seed = *args.seed_override;

  const bool sweeping = !args.sweep_param.empty();
  if (sweeping && args.sweep_values.empty())
    throw d2dsim::ConfigError("--values: required with --sweep");
  if (!args.decisions_out.empty() && sweeping)
    throw d2dsim::ConfigError(
        "--emit-decisions: only available for single runs");

  if (!args.topology_out.empty() || !args.selections_out.empty()) {
    const auto scenario = d2dsim::build_scenario(config);
    if (!args.topology_out.empty())
      d2dsim::write_topology_csv(args.topology_out, scenario.topology);
    if (!args.selections_out.empty()) {
      std::vector<d2dsim::SelectionRow> selections;
      d2dsim::run_on_scenario(scenario, config, nullptr, &selections);
      d2dsim::write_selections_csv(args.selections_out, selections);
    }
  }

  std::vector<d2dsim::SweepRow> rows;
  if (sweeping) {
    rows = d2dsim::sweep(config,
                         d2dsim::sweep_param_from_name(args.sweep_param),
                         args.sweep_values, args.reps);
  } else {
    d2dsim::SweepRow row;
    row.param_value = 0.0;
    row.seed = config.seed;
    if (!args.decisions_out.empty()) {
      std::vector<d2dsim::ServiceDecision> audit;
      row.metrics = d2dsim::run_simulation(config, &audit);
      d2dsim::write_decisions_csv(args.decisions_out, audit);
    } else {
      row.metrics = d2dsim::run_simulation(config);
    }
    rows.push_back(std::move(row));
  }
  d2dsim::write_results_csv(args.out, rows);
  d2dsim::log_info("simulate: wrote " + std::to_string(rows.size()) +
                   " result rows to " + args.out);
  return 0;
}

int run_tail(const TailArgs& args) {
  if (!(args.alpha > 0)) throw d2dsim::ConfigError("alpha: must be > 0");
  if (args.n < 2) throw d2dsim::ConfigError("n: must be >= 2");
  if (args.n_samples < 1) throw d2dsim::ConfigError("samples: must be >= 1");
  d2dsim::Rng rng(args.seed);
  const auto table =
      d2dsim::build_table(args.alpha, args.n, args.n_samples, rng);
  d2dsim::write_table_csv(args.out, table);
  d2dsim::log_info(
      "tail: saddlepoint normalization deficit " +
      d2dsim::format_double(table.saddlepoint_normalization_deficit) +
      ", excluded negative mass " +
      d2dsim::format_double(table.excluded_negative_mass));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social-network-enhanced D2D offloading simulator"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit = app.add_subcommand(
      "fit", "Build the closeness graph from an encounter trace");
  fit->add_option("--trace", fit_args.trace_path, "Encounter trace CSV")
      ->required();
  fit->add_option("--x-min", fit_args.x_min,
                  "Minimal contact duration for one package (seconds)")
      ->required();
  fit->add_option("--n-min", fit_args.n_min,
                  "Minimum encounters for an edge (default 2)");
  fit->add_option("--out", fit_args.out, "Output graph CSV")->required();

  ClusterArgs cluster_args;
  auto* cluster = app.add_subcommand(
      "cluster", "Partition a closeness graph into OffSNs and white nodes");
  cluster->add_option("--graph", cluster_args.graph_path, "Graph CSV")
      ->required();
  cluster->add_option("--w-t", cluster_args.w_threshold,
                      "Closeness threshold w_T in [0,1]")
      ->required();
  cluster->add_option("--out", cluster_args.out, "Output partition JSON")
      ->required();

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand(
      "simulate", "Run the offloading pipeline (single run or sweep)");
  simulate->add_option("--config", sim_args.config_path,
                       "Config file (.toml or .json)")
      ->required();
  simulate->add_option("--out", sim_args.out, "Results CSV")->required();
  simulate->add_option("--seed", sim_args.seed_override, "Seed override");
  simulate->add_option("--sweep", sim_args.sweep_param,
                       "Sweep parameter: d_max or c_c");
  simulate->add_option("--values", sim_args.sweep_values,
                       "Sweep values (comma separated)")
      ->delimiter(',');
  simulate->add_option("--reps", sim_args.reps,
                       "Repetitions per sweep value (default 20)");
  simulate->add_option("--emit-decisions", sim_args.decisions_out,
                       "Write the per-decision audit CSV (single runs)");
  simulate->add_option("--emit-topology", sim_args.topology_out,
                       "Write the node placement CSV");
  simulate->add_option("--emit-selections", sim_args.selections_out,
                       "Write the selection history CSV");

  TailArgs tail_args;
  auto* tail = app.add_subcommand(
      "tail", "Tabulate bounds, saddlepoint and empirical distributions");
  tail->add_option("--alpha", tail_args.alpha, "IBP concentration parameter")
      ->required();
  tail->add_option("--n", tail_args.n, "User index (>= 2)")->required();
  tail->add_option("--samples", tail_args.n_samples,
                   "IBP replays for the empirical CDF");
  tail->add_option("--seed", tail_args.seed, "Sampling seed");
  tail->add_option("--out", tail_args.out, "Output table CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) return run_fit(fit_args);
    if (cluster->parsed()) return run_cluster(cluster_args);
    if (simulate->parsed()) return run_simulate(sim_args);
    if (tail->parsed()) return run_tail(tail_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
