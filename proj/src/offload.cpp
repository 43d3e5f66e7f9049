#include "d2dsim/offload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "d2dsim/errors.hpp"
#include "d2dsim/trace.hpp"

namespace d2dsim {

namespace {

// Stream tags for deriving independent rng streams from the run seed.
enum : std::uint64_t {
  kStreamTrace = 1,
  kStreamPlacement = 2,
  kStreamIbp = 3,
  kStreamService = 4,
  kStreamSession = 5,
};

}  // namespace

void SyntheticTraceParams::validate() const {
  if (n_ues < 1) throw ConfigError("synthetic.n_ues: must be >= 1");
  if (encounters_per_pair < 1)
    throw ConfigError("synthetic.encounters_per_pair: must be >= 1");
  if (!(duration_shape > 0))
    throw ConfigError("synthetic.duration_shape: must be > 0");
  if (!(duration_scale > 0))
    throw ConfigError("synthetic.duration_scale: must be > 0");
  if (!(pair_fraction >= 0 && pair_fraction <= 1))
    throw ConfigError("synthetic.pair_fraction: must be in [0,1]");
}

void SimConfig::validate() const {
  if (!(alpha > 0)) throw ConfigError("alpha: must be > 0");
  if (n_users < 1) throw ConfigError("n_users: must be >= 1");
  if (!(w_threshold >= 0 && w_threshold <= 1))
    throw ConfigError("w_t: must be in [0,1]");
  if (x_min < 0) throw ConfigError("x_min: must be >= 0");
  if (n_min < 1) throw ConfigError("n_min: must be >= 1");
  if (!(d_max > 0)) throw ConfigError("d_max: must be > 0");
  if (control_cost < 0) throw ConfigError("c_c: must be >= 0");
  channel.validate();
  if (!(placement.cell_radius > 0))
    throw ConfigError("placement.cell_radius: must be > 0");
  if (!(placement.min_separation > 0))
    throw ConfigError("placement.min_separation: must be > 0");
  if (trace_path.has_value() == synthetic.has_value())
    throw ConfigError("exactly one of trace.path or synthetic must be given");
  if (synthetic) synthetic->validate();
}

const char* route_name(Route route) {
  switch (route) {
    case Route::D2dSuccess: return "D2D_SUCCESS";
    case Route::D2dFailFallback: return "D2D_FAIL_FALLBACK";
    case Route::CellularNew: return "CELLULAR_NEW";
    case Route::CellularWhiteArea: return "CELLULAR_WHITE_AREA";
  }
  return "UNKNOWN";
}

double RunMetrics::mean_utility() const {
  if (utility_per_user.empty()) return 0.0;
  double sum = 0.0;
  for (double u : utility_per_user) sum += u;
  return sum / static_cast<double>(utility_per_user.size());
}

std::vector<EncounterRecord> generate_synthetic_trace(
    const SyntheticTraceParams& params, Rng& rng) {
  params.validate();
  std::vector<std::string> ids;
  ids.reserve(params.n_ues);
  const int width = params.n_ues >= 1000 ? 4 : 3;
  for (std::size_t i = 1; i <= params.n_ues; ++i) {
    std::string num = std::to_string(i);
    ids.push_back("ue" + std::string(width - num.size(), '0') + num);
  }

  std::vector<EncounterRecord> records;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (params.pair_fraction < 1.0 && !rng.bernoulli(params.pair_fraction))
        continue;
      double t = 0.0;
      for (std::size_t e = 0; e < params.encounters_per_pair; ++e) {
        const double duration =
            rng.gamma(params.duration_shape, params.duration_scale);
        records.push_back(EncounterRecord{ids[i], ids[j], t, t + duration});
        t += duration + 1.0;
      }
    }
  }
  return records;
}

Scenario build_scenario(const SimConfig& config) {
  config.validate();

  std::vector<EncounterRecord> records;
  if (config.trace_path) {
    records = parse_trace_file(*config.trace_path);
  } else {
    Rng trace_rng(mix_seed(config.seed, kStreamTrace));
    records = generate_synthetic_trace(*config.synthetic, trace_rng);
  }

  const auto stats = aggregate_contacts(records);
  Scenario scenario;
  scenario.graph = build_closeness_graph(stats, config.x_min, config.n_min);
  scenario.partition = build_offsn(scenario.graph, config.w_threshold);

  std::vector<std::string> ids(scenario.graph.nodes.begin(),
                               scenario.graph.nodes.end());
  if (ids.empty()) throw ConfigError("trace: no UEs found");
  Rng placement_rng(mix_seed(config.seed, kStreamPlacement));
  scenario.topology =
      place_nodes(ids, config.placement.cell_radius, config.placement.hotspots,
                  config.placement.min_separation, placement_rng);
  return scenario;
}

double enb_utility(double prior_mass, double r_d, std::size_t m_n_0,
                   double r_c, std::size_t m_n, double c_c) {
  return prior_mass * r_d + static_cast<double>(m_n_0) * r_c -
         static_cast<double>(m_n) * c_c;
}

double enb_utility(const IbpState& state_before, std::size_t n, double r_d,
                   double r_c, std::size_t m_n_0, std::size_t m_n, double c_c) {
  return enb_utility(state_before.prior_mass(n), r_d, m_n_0, r_c, m_n, c_c);
}

namespace {

struct RoutedRequest {
  ContentId content = 0;
  Route route = Route::CellularNew;
  std::string provider;  // D2D transmitter when routed D2D
  double control_cost = 0.0;
};

// Routing for one request of a session. Consumes one Bernoulli draw iff a
// D2D setup is attempted.
RoutedRequest route_request(ContentId content, bool is_old,
                            const std::string& requester,
                            const OffsnPartition& partition,
                            const HolderMap& holders,
                            const Topology& topology,
                            const ClosenessGraph& graph,
                            const SimConfig& config, Rng& service_rng) {
  RoutedRequest routed;
  routed.content = content;

  const int cluster = partition.cluster_of(requester);
  if (cluster < 0) {
    routed.route = Route::CellularWhiteArea;
    return routed;
  }
  if (!is_old) {
    routed.route = Route::CellularNew;
    return routed;
  }

  // Eligible providers: hold the content, share the requester's OffSN and
  // sit within d_max. The requester itself never qualifies.
  const auto it = holders.find(content);
  const Point& rx_pos = topology.ue_positions.at(requester);
  const std::string* best = nullptr;
  double best_w = -1.0;
  if (it != holders.end()) {
    for (const auto& candidate : it->second) {
      if (candidate == requester) continue;
      if (partition.cluster_of(candidate) != cluster) continue;
      const auto pos_it = topology.ue_positions.find(candidate);
      if (pos_it == topology.ue_positions.end())
        throw std::logic_error("holder '" + candidate + "' has no position");
      if (distance(rx_pos, pos_it->second) > config.d_max) continue;
      const double w = graph.weight(requester, candidate);
      // Ties broken by lowest UE id: the holder set iterates in id order,
      // so a strictly-greater test keeps the first.
      if (w > best_w) {
        best_w = w;
        best = &candidate;
      }
    }
  }

  if (best == nullptr) {
    routed.route = Route::CellularNew;  // no setup attempted, no C_c
    return routed;
  }

  routed.provider = *best;
  routed.control_cost = config.control_cost;
  routed.route = service_rng.bernoulli(best_w) ? Route::D2dSuccess
                                               : Route::D2dFailFallback;
  if (routed.route != Route::D2dSuccess) routed.provider.clear();
  return routed;
}

// Serves one user session: routes every request, assembles the session
// link set (each D2D pair reuses the rb of one uniformly chosen session
// cellular downlink), computes rates and updates the holder map.
std::vector<ServiceDecision> serve_session(
    std::size_t user, const std::string& requester,
    const std::vector<std::pair<ContentId, bool>>& requests,  // (id, is_old)
    const OffsnPartition& partition, HolderMap& holders,
    const Topology& topology, const ClosenessGraph& graph,
    const SimConfig& config, Rng& service_rng) {
  std::vector<RoutedRequest> routed;
  routed.reserve(requests.size());
  for (const auto& [content, is_old] : requests)
    routed.push_back(route_request(content, is_old, requester, partition,
                                   holders, topology, graph, config,
                                   service_rng));

  LinkSet links;
  std::vector<int> cellular_of(routed.size(), -1);
  std::vector<int> d2d_of(routed.size(), -1);
  for (std::size_t i = 0; i < routed.size(); ++i) {
    if (routed[i].route == Route::D2dSuccess) {
      d2d_of[i] = static_cast<int>(links.d2d.size());
      links.d2d.push_back(D2dLink{routed[i].provider, requester, 0, {}});
    } else {
      cellular_of[i] = static_cast<int>(links.cellular.size());
      links.cellular.push_back(
          CellularLink{requester, static_cast<int>(links.cellular.size())});
    }
  }
  // rb assignment: share a uniformly chosen concurrent cellular downlink of
  // this session; with none active, each D2D pair gets a fresh rb.
  int next_rb = static_cast<int>(links.cellular.size());
  for (auto& d2d : links.d2d) {
    if (!links.cellular.empty())
      d2d.rb = links.cellular[service_rng.uniform_index(links.cellular.size())]
                   .rb;
    else
      d2d.rb = next_rb++;
  }
  links.validate();

  std::vector<ServiceDecision> decisions;
  decisions.reserve(routed.size());
  for (std::size_t i = 0; i < routed.size(); ++i) {
    ServiceDecision d;
    d.user = user;
    d.content = routed[i].content;
    d.route = routed[i].route;
    d.control_cost_charged = routed[i].control_cost;
    if (d.route == Route::D2dSuccess) {
      d.provider = routed[i].provider;
      d.rate_delivered =
          rate_d2d(links, static_cast<std::size_t>(d2d_of[i]), topology,
                   config.channel);
    } else {
      d.provider = "eNB";
      d.rate_delivered =
          rate_cellular(links, static_cast<std::size_t>(cellular_of[i]),
                        topology, config.channel);
    }
    holders[d.content].insert(requester);
    decisions.push_back(std::move(d));
  }
  return decisions;
}

std::vector<std::pair<ContentId, bool>> session_requests(
    const SelectionOutcome& outcome) {
  std::vector<std::pair<ContentId, bool>> requests;
  requests.reserve(outcome.total());
  for (ContentId id : outcome.old_contents) requests.emplace_back(id, true);
  for (ContentId id : outcome.new_contents) requests.emplace_back(id, false);
  return requests;
}

}  // namespace

ServiceDecision serve_request(std::size_t user, ContentId content,
                              bool is_old, const std::string& requester_ue,
                              const OffsnPartition& partition,
                              HolderMap& holders, const Topology& topology,
                              const ClosenessGraph& graph,
                              const SimConfig& config, Rng& service_rng) {
  auto decisions =
      serve_session(user, requester_ue, {{content, is_old}}, partition,
                    holders, topology, graph, config, service_rng);
  return decisions.front();
}

RunMetrics run_on_scenario(const Scenario& scenario, const SimConfig& config,
                           std::vector<ServiceDecision>* audit,
                           std::vector<SelectionRow>* selections) {
  config.validate();

  std::vector<std::string> ue_ids;
  ue_ids.reserve(scenario.topology.ue_positions.size());
  for (const auto& [id, _] : scenario.topology.ue_positions)
    ue_ids.push_back(id);

  Rng ibp_rng(mix_seed(config.seed, kStreamIbp));
  Rng service_rng(mix_seed(config.seed, kStreamService));
  Rng session_rng(mix_seed(config.seed, kStreamSession));

  IbpState ibp(config.alpha);
  HolderMap holders;

  // Warm-up sessions seed content popularity and holder placement but are
  // not measured and not served through the rate model.
  for (std::size_t w = 0; w < config.warmup_users; ++w) {
    const std::string& requester = ue_ids[session_rng.uniform_index(ue_ids.size())];
    const SelectionOutcome outcome = ibp.select_next(ibp_rng);
    for (ContentId id : outcome.old_contents) holders[id].insert(requester);
    for (ContentId id : outcome.new_contents) holders[id].insert(requester);
    if (selections) {
      for (ContentId id : outcome.old_contents)
        selections->push_back({outcome.user_index, id, false});
      for (ContentId id : outcome.new_contents)
        selections->push_back({outcome.user_index, id, true});
    }
  }

  RunMetrics metrics;
  for (std::size_t i = 0; i < config.n_users; ++i) {
    const std::string& requester = ue_ids[session_rng.uniform_index(ue_ids.size())];
    const std::size_t n = ibp.users_seen() + 1;
    const double prior_mass = ibp.prior_mass(n);
    const SelectionOutcome outcome = ibp.select_next(ibp_rng);
    if (selections) {
      for (ContentId id : outcome.old_contents)
        selections->push_back({outcome.user_index, id, false});
      for (ContentId id : outcome.new_contents)
        selections->push_back({outcome.user_index, id, true});
    }

    const auto decisions =
        serve_session(n, requester, session_requests(outcome),
                      scenario.partition, holders, scenario.topology,
                      scenario.graph, config, service_rng);

    double d2d_rate_sum = 0.0, cell_rate_sum = 0.0;
    std::size_t d2d_count = 0, cell_count = 0;
    for (const auto& d : decisions) {
      switch (d.route) {
        case Route::D2dSuccess:
          metrics.counts.d2d_success++;
          metrics.d2d_sum_rate += d.rate_delivered;
          d2d_rate_sum += d.rate_delivered;
          ++d2d_count;
          break;
        case Route::D2dFailFallback:
          metrics.counts.d2d_fail_fallback++;
          metrics.enb_sum_rate += d.rate_delivered;
          cell_rate_sum += d.rate_delivered;
          ++cell_count;
          break;
        case Route::CellularNew:
          metrics.counts.cellular_new++;
          metrics.enb_sum_rate += d.rate_delivered;
          cell_rate_sum += d.rate_delivered;
          ++cell_count;
          break;
        case Route::CellularWhiteArea:
          metrics.counts.cellular_white_area++;
          metrics.enb_sum_rate += d.rate_delivered;
          cell_rate_sum += d.rate_delivered;
          ++cell_count;
          break;
      }
    }
    if (audit)
      audit->insert(audit->end(), decisions.begin(), decisions.end());

    // Representative session rates for the utility accounting: the mean delivered
    // D2D and cellular rates, with V_c at the requester standing in when no
    // cellular request was served.
    const double r_d = d2d_count ? d2d_rate_sum / static_cast<double>(d2d_count) : 0.0;
    double r_c;
    if (cell_count) {
      r_c = cell_rate_sum / static_cast<double>(cell_count);
    } else {
      const auto& rx = scenario.topology.ue_positions.at(requester);
      r_c = rate_interference_free(
          config.channel,
          channel_gain(scenario.topology.enb_position, rx,
                       config.channel.path_loss_exponent));
    }
    metrics.utility_per_user.push_back(
        enb_utility(prior_mass, r_d, outcome.new_count(), r_c, outcome.total(),
                    config.control_cost));
  }

  const std::size_t total = metrics.counts.total();
  metrics.offloaded_fraction =
      total ? static_cast<double>(metrics.counts.d2d_success) /
                  static_cast<double>(total)
            : 0.0;
  return metrics;
}

RunMetrics run_simulation(const SimConfig& config,
                          std::vector<ServiceDecision>* audit,
                          std::vector<SelectionRow>* selections) {
  const Scenario scenario = build_scenario(config);
  return run_on_scenario(scenario, config, audit, selections);
}

SweepParam sweep_param_from_name(const std::string& name) {
  if (name == "d_max") return SweepParam::DMax;
  if (name == "c_c") return SweepParam::ControlCost;
  throw ConfigError("sweep: unknown parameter '" + name +
                    "' (expected d_max or c_c)");
}

const char* sweep_param_name(SweepParam param) {
  return param == SweepParam::DMax ? "d_max" : "c_c";
}

std::vector<SweepRow> sweep(const SimConfig& config, SweepParam param,
                            const std::vector<double>& values,
                            std::size_t repetitions) {
  if (values.empty()) throw ConfigError("sweep: values must be nonempty");
  if (repetitions < 1) throw ConfigError("sweep: reps must be >= 1");

  std::vector<SweepRow> rows;
  rows.reserve(values.size() * repetitions);
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      SimConfig run_config = config;
      if (param == SweepParam::DMax)
        run_config.d_max = values[vi];
      else
        run_config.control_cost = values[vi];
      // Repetition seeds are shared across parameter values (common random
      // numbers), so cross-value comparisons see the same traces, topologies
      // and selection processes.
      run_config.seed = mix_seed(config.seed, rep + 1);
      SweepRow row;
      row.param_value = values[vi];
      row.seed = run_config.seed;
      row.metrics = run_simulation(run_config);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<SweepAggregate> aggregate_sweep(const std::vector<SweepRow>& rows) {
  std::map<double, std::pair<SweepAggregate, std::size_t>> acc;
  for (const auto& row : rows) {
    auto& [agg, count] = acc[row.param_value];
    agg.param_value = row.param_value;
    agg.mean_enb_sum_rate += row.metrics.enb_sum_rate;
    agg.mean_d2d_sum_rate += row.metrics.d2d_sum_rate;
    agg.mean_offloaded_fraction += row.metrics.offloaded_fraction;
    agg.mean_utility += row.metrics.mean_utility();
    ++count;
  }
  std::vector<SweepAggregate> out;
  out.reserve(acc.size());
  for (auto& [_, entry] : acc) {
    auto& [agg, count] = entry;
    const double n = static_cast<double>(count);
    agg.mean_enb_sum_rate /= n;
    agg.mean_d2d_sum_rate /= n;
    agg.mean_offloaded_fraction /= n;
    agg.mean_utility /= n;
    out.push_back(agg);
  }
  return out;
}

}  // namespace d2dsim
