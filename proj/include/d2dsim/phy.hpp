#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "d2dsim/rng.hpp"

namespace d2dsim {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

// Transmit powers and noise in linear watts; eta is the path-loss exponent.
struct ChannelParams {
  double p_enb = 0.0;
  double p_d2d = 0.0;
  double noise = 0.0;
  double path_loss_exponent = 3.5;

  void validate() const;
};

struct Hotspot {
  Point center;
  double radius = 0.0;
  double fraction = 0.0;  // fraction of UEs placed inside this disk
};

// Cell geometry: eNB at the origin, all UEs inside the cell disk.
struct Topology {
  double cell_radius = 0.0;
  Point enb_position{};
  std::map<std::string, Point> ue_positions;
  std::vector<Hotspot> hotspots;
};

// Places the given UEs: floor(fraction_i * N) of them uniformly inside each
// hotspot disk, in order, the remainder uniformly in the cell disk. A
// resampling loop enforces the minimum pairwise separation. Deterministic
// given the rng state.
Topology place_nodes(const std::vector<std::string>& ue_ids,
                     double cell_radius, const std::vector<Hotspot>& hotspots,
                     double min_separation, Rng& rng);

// Path-loss channel gain h^2 = max(d, 1m)^{-eta}; capped at 1 below the
// reference distance. Coincident points are a domain error.
double channel_gain(const Point& a, const Point& b, double eta);

// log2(1 + S / (I + N)) in bits/s/Hz.
double spectral_efficiency(double signal, double interference, double noise);

// eNB downlink to one UE. rb identifies the resource block the link uses.
struct CellularLink {
  std::string rx;
  int rb = 0;
};

// Direct UE-to-UE link. `power` overrides ChannelParams::p_d2d when set.
struct D2dLink {
  std::string tx;
  std::string rx;
  int rb = 0;
  std::optional<double> power;
};

// Concurrently active transmissions. Two links interfere iff they share an
// rb, which realizes the pairwise beta indicators.
struct LinkSet {
  std::vector<CellularLink> cellular;
  std::vector<D2dLink> d2d;

  // Enforces that no UE is both a D2D transmitter and a D2D receiver.
  void validate() const;
};

// R_c for cellular link `index`: eNB signal over co-channel D2D
// interference plus noise. Equals V_c when no D2D link shares the rb.
double rate_cellular(const LinkSet& links, std::size_t index,
                     const Topology& topo, const ChannelParams& params);

// R_d for D2D link `index`: the eNB downlink interference term is always
// present, plus co-channel D2D interferers.
double rate_d2d(const LinkSet& links, std::size_t index, const Topology& topo,
                const ChannelParams& params);

// V_c = log2(1 + P_B h^2 / N_0), the interference-free cellular rate.
double rate_interference_free(const ChannelParams& params, double gain);

}  // namespace d2dsim
