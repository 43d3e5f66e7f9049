#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "d2dsim/ibp.hpp"
#include "d2dsim/phy.hpp"
#include "d2dsim/social.hpp"

namespace d2dsim {

// Synthetic encounter-trace generator parameters. Every included pair gets
// `encounters_per_pair` contacts with Gamma(shape, scale) durations.
struct SyntheticTraceParams {
  std::size_t n_ues = 0;
  std::size_t encounters_per_pair = 0;
  double duration_shape = 0.0;
  double duration_scale = 0.0;
  double pair_fraction = 1.0;

  void validate() const;
};

struct PlacementParams {
  double cell_radius = 0.0;
  double min_separation = 0.5;
  std::vector<Hotspot> hotspots;
};

// Full run configuration. Exactly one of trace_path / synthetic supplies
// the encounter data.
struct SimConfig {
  double alpha = 20.0;
  std::size_t n_users = 27;     // measured IBP selection sessions
  std::size_t warmup_users = 0; // sessions run before measurement starts
  double w_threshold = 0.5;     // w_T
  double x_min = 0.0;           // seconds
  std::size_t n_min = 2;
  double d_max = 0.0;           // meters
  double control_cost = 0.0;    // C_c, rate units
  ChannelParams channel;
  PlacementParams placement;
  std::optional<std::string> trace_path;
  std::optional<SyntheticTraceParams> synthetic;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Route {
  D2dSuccess,
  D2dFailFallback,
  CellularNew,
  CellularWhiteArea,
};

const char* route_name(Route route);

// Outcome of serving one content request.
struct ServiceDecision {
  std::size_t user = 0;  // IBP user index n
  ContentId content = 0;
  Route route = Route::CellularNew;
  std::string provider;  // UE id for D2D, "eNB" otherwise
  double rate_delivered = 0.0;
  double control_cost_charged = 0.0;
};

struct RouteCounts {
  std::size_t d2d_success = 0;
  std::size_t d2d_fail_fallback = 0;
  std::size_t cellular_new = 0;
  std::size_t cellular_white_area = 0;

  std::size_t total() const {
    return d2d_success + d2d_fail_fallback + cellular_new + cellular_white_area;
  }
};

struct RunMetrics {
  double enb_sum_rate = 0.0;
  double d2d_sum_rate = 0.0;
  double offloaded_fraction = 0.0;  // D2D-served requests / total requests
  std::vector<double> utility_per_user;
  RouteCounts counts;

  double mean_utility() const;
};

// Stage-1 artifacts: social graph, OffSN partition and node placement.
struct Scenario {
  ClosenessGraph graph;
  OffsnPartition partition;
  Topology topology;
};

std::vector<EncounterRecord> generate_synthetic_trace(
    const SyntheticTraceParams& params, Rng& rng);

// Builds the scenario for a config: trace (file or synthetic) -> contact
// stats -> closeness graph -> OffSN partition -> placement.
Scenario build_scenario(const SimConfig& config);

using HolderMap = std::map<ContentId, std::set<std::string>>;

// eNB utility U_B(n): prior_mass * R_d + m_n^0 * R_c - m_n * C_c.
double enb_utility(double prior_mass, double r_d, std::size_t m_n_0,
                   double r_c, std::size_t m_n, double c_c);
double enb_utility(const IbpState& state_before, std::size_t n, double r_d,
                   double r_c, std::size_t m_n_0, std::size_t m_n, double c_c);

// Serves a single request in an otherwise idle scheduling epoch. Routing:
// white-area users are served at V_c; new contents go cellular; old
// contents attempt D2D against the eligible holder with maximal closeness
// (Bernoulli success with probability w), falling back to cellular on
// failure with C_c charged either way. The requester joins the holders of
// the content in every case.
ServiceDecision serve_request(std::size_t user, ContentId content,
                              bool is_old, const std::string& requester_ue,
                              const OffsnPartition& partition,
                              HolderMap& holders, const Topology& topology,
                              const ClosenessGraph& graph,
                              const SimConfig& config, Rng& service_rng);

struct SelectionRow {
  std::size_t user_index = 0;
  ContentId content = 0;
  bool was_new = false;
};

// Executes the full offloading pipeline on a prebuilt scenario and returns
// the accumulated metrics. Optional sinks receive the per-decision audit
// rows and the selection history.
RunMetrics run_on_scenario(const Scenario& scenario, const SimConfig& config,
                           std::vector<ServiceDecision>* audit = nullptr,
                           std::vector<SelectionRow>* selections = nullptr);

// build_scenario + run_on_scenario.
RunMetrics run_simulation(const SimConfig& config,
                          std::vector<ServiceDecision>* audit = nullptr,
                          std::vector<SelectionRow>* selections = nullptr);

enum class SweepParam { DMax, ControlCost };

SweepParam sweep_param_from_name(const std::string& name);
const char* sweep_param_name(SweepParam param);

struct SweepRow {
  double param_value = 0.0;
  std::uint64_t seed = 0;
  RunMetrics metrics;
};

// One run per (value, repetition); the rep seed is derived from the base
// seed, the value index and the repetition index.
std::vector<SweepRow> sweep(const SimConfig& config, SweepParam param,
                            const std::vector<double>& values,
                            std::size_t repetitions);

// Mean metrics per parameter value, in ascending value order.
struct SweepAggregate {
  double param_value = 0.0;
  double mean_enb_sum_rate = 0.0;
  double mean_d2d_sum_rate = 0.0;
  double mean_offloaded_fraction = 0.0;
  double mean_utility = 0.0;
};

std::vector<SweepAggregate> aggregate_sweep(const std::vector<SweepRow>& rows);

}  // namespace d2dsim
