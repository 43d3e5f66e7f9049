#include "d2dsim/phy.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "d2dsim/errors.hpp"

namespace d2dsim {

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void ChannelParams::validate() const {
  if (!(p_enb > 0)) throw ConfigError("channel.p_enb: must be > 0");
  if (!(p_d2d > 0)) throw ConfigError("channel.p_d2d: must be > 0");
  if (!(noise > 0)) throw ConfigError("channel.noise: must be > 0");
  if (!(path_loss_exponent >= 2.0 && path_loss_exponent <= 6.0))
    throw ConfigError("channel.path_loss_exponent: must be in [2, 6]");
}

namespace {

Point sample_in_disk(const Point& center, double radius, Rng& rng) {
  const double r = radius * std::sqrt(rng.uniform01());
  const double angle = 2.0 * std::numbers::pi * rng.uniform01();
  return Point{center.x + r * std::cos(angle), center.y + r * std::sin(angle)};
}

Point place_one(const Point& center, double radius, double min_separation,
                const Topology& topo, Rng& rng) {
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Point candidate = sample_in_disk(center, radius, rng);
    bool clear = true;
    for (const auto& [_, pos] : topo.ue_positions) {
      if (distance(candidate, pos) < min_separation) {
        clear = false;
        break;
      }
    }
    if (clear) return candidate;
  }
  throw ConfigError(
      "placement.min_separation: cannot place all UEs with the requested "
      "separation");
}

}  // namespace

Topology place_nodes(const std::vector<std::string>& ue_ids,
                     double cell_radius, const std::vector<Hotspot>& hotspots,
                     double min_separation, Rng& rng) {
  if (ue_ids.empty())
    throw ConfigError("placement: at least one UE is required");
  if (!(cell_radius > 0))
    throw ConfigError("placement.cell_radius: must be > 0");
  if (!(min_separation > 0))
    throw ConfigError("placement.min_separation: must be > 0");

  double total_fraction = 0.0;
  for (std::size_t i = 0; i < hotspots.size(); ++i) {
    const auto& h = hotspots[i];
    const std::string path = "placement.hotspots[" + std::to_string(i) + "]";
    if (!(h.radius > 0)) throw ConfigError(path + ": radius must be > 0");
    if (h.fraction < 0 || h.fraction > 1)
      throw ConfigError(path + ": fraction must be in [0,1]");
    if (distance(h.center, Point{}) + h.radius > cell_radius)
      throw ConfigError(path + ": hotspot disk extends beyond the cell");
    total_fraction += h.fraction;
  }
  if (total_fraction > 1.0 + 1e-12)
    throw ConfigError("placement.hotspots: fractions sum to more than 1");

  Topology topo;
  topo.cell_radius = cell_radius;
  topo.hotspots = hotspots;

  const std::size_t n = ue_ids.size();
  std::size_t next = 0;
  for (const auto& hotspot : hotspots) {
    const auto quota = static_cast<std::size_t>(
        std::floor(hotspot.fraction * static_cast<double>(n)));
    for (std::size_t i = 0; i < quota && next < n; ++i, ++next)
      topo.ue_positions.emplace(
          ue_ids[next],
          place_one(hotspot.center, hotspot.radius, min_separation, topo, rng));
  }
  for (; next < n; ++next)
    topo.ue_positions.emplace(
        ue_ids[next],
        place_one(Point{}, cell_radius, min_separation, topo, rng));
  return topo;
}

double channel_gain(const Point& a, const Point& b, double eta) {
  const double d = distance(a, b);
  if (d == 0.0)
    throw std::domain_error("channel_gain: coincident endpoints");
  return std::pow(std::max(d, 1.0), -eta);
}

double spectral_efficiency(double signal, double interference, double noise) {
  return std::log2(1.0 + signal / (interference + noise));
}

void LinkSet::validate() const {
  std::set<std::string> transmitters;
  std::set<std::string> receivers;
  for (const auto& link : d2d) {
    if (link.tx == link.rx)
      throw std::logic_error("LinkSet: D2D link with identical endpoints");
    transmitters.insert(link.tx);
    receivers.insert(link.rx);
  }
  for (const auto& tx : transmitters)
    if (receivers.count(tx))
      throw std::logic_error("LinkSet: UE '" + tx +
                             "' is both D2D transmitter and receiver");
}

namespace {

const Point& ue_position(const Topology& topo, const std::string& id) {
  const auto it = topo.ue_positions.find(id);
  if (it == topo.ue_positions.end())
    throw std::logic_error("unknown UE '" + id + "' in link set");
  return it->second;
}

double d2d_power(const D2dLink& link, const ChannelParams& params) {
  return link.power.value_or(params.p_d2d);
}

}  // namespace

double rate_cellular(const LinkSet& links, std::size_t index,
                     const Topology& topo, const ChannelParams& params) {
  const auto& link = links.cellular.at(index);
  const Point& rx = ue_position(topo, link.rx);
  const double eta = params.path_loss_exponent;
  const double signal =
      params.p_enb * channel_gain(topo.enb_position, rx, eta);
  double interference = 0.0;
  for (const auto& d : links.d2d) {
    if (d.rb != link.rb) continue;  // beta_cd = 0
    interference +=
        d2d_power(d, params) * channel_gain(ue_position(topo, d.tx), rx, eta);
  }
  return spectral_efficiency(signal, interference, params.noise);
}

double rate_d2d(const LinkSet& links, std::size_t index, const Topology& topo,
                const ChannelParams& params) {
  const auto& link = links.d2d.at(index);
  const Point& rx = ue_position(topo, link.rx);
  const double eta = params.path_loss_exponent;
  const double signal = d2d_power(link, params) *
                        channel_gain(ue_position(topo, link.tx), rx, eta);
  // The eNB downlink term is present regardless of rb assignment.
  double interference =
      params.p_enb * channel_gain(topo.enb_position, rx, eta);
  for (std::size_t j = 0; j < links.d2d.size(); ++j) {
    if (j == index) continue;
    const auto& other = links.d2d[j];
    if (other.rb != link.rb) continue;  // beta_dd' = 0
    interference += d2d_power(other, params) *
                    channel_gain(ue_position(topo, other.tx), rx, eta);
  }
  return spectral_efficiency(signal, interference, params.noise);
}

double rate_interference_free(const ChannelParams& params, double gain) {
  return spectral_efficiency(params.p_enb * gain, 0.0, params.noise);
}

}  // namespace d2dsim
