#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "d2dsim/offload.hpp"
#include "d2dsim/social.hpp"
#include "d2dsim/tail.hpp"

namespace d2dsim {

// Shortest round-trippable decimal form of a double; stable across runs.
std::string format_double(double value);

// Closeness graph as `node_i,node_j,weight` rows, edges in canonical pair
// order.
void write_graph_csv(const std::filesystem::path& path,
                     const ClosenessGraph& graph);
ClosenessGraph read_graph_csv(const std::filesystem::path& path);

// Partition as {"clusters": [[ids...]], "white": [ids...], "w_T": x}.
void write_partition_json(const std::filesystem::path& path,
                          const OffsnPartition& partition);

// Topology as `ue_id,x,y`.
void write_topology_csv(const std::filesystem::path& path,
                        const Topology& topology);

// Sweep/run results, one row per repetition:
// `param_value,seed,enb_sum_rate,d2d_sum_rate,offloaded_fraction,mean_utility`.
void write_results_csv(const std::filesystem::path& path,
                       const std::vector<SweepRow>& rows);

// Per-decision audit log: `user,content,route,provider,rate,cost`.
void write_decisions_csv(const std::filesystem::path& path,
                         const std::vector<ServiceDecision>& decisions);

// Selection history: `user_index,content_id,was_new`.
void write_selections_csv(const std::filesystem::path& path,
                          const std::vector<SelectionRow>& rows);

// Distribution table:
// `k,exact_pmf,exact_cdf,sp_pmf,sp_cdf,empirical_cdf,chernoff_bound_on_cdf`.
void write_table_csv(const std::filesystem::path& path,
                     const DistributionTable& table);

}  // namespace d2dsim
