#include "d2dsim/social.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace d2dsim {

namespace {

constexpr int kMaxIterations = 2'000'000;
constexpr double kConvergenceEps = 1e-16;

// log(x^a e^{-x} / Gamma(a)). Long double keeps the cancellation between
// a*log(x), x and lgamma(a) below ~1e-14 even for a ~ 1e4.
double log_prefactor(double a, double x) {
  const long double la = a;
  const long double lx = x;
  return static_cast<double>(la * std::log(lx) - lx - std::lgamma(la));
}

// P(a,x) by the lower series, valid and fast for x < a+1.
double lower_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kConvergenceEps)
      return sum * std::exp(log_prefactor(a, x));
  }
  throw std::runtime_error("incomplete gamma series failed to converge");
}

// Q(a,x) by the modified Lentz continued fraction, for x >= a+1.
double upper_continued_fraction(double a, double x) {
  constexpr double kFpMin = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kConvergenceEps)
      return h * std::exp(log_prefactor(a, x));
  }
  throw std::runtime_error("incomplete gamma continued fraction failed to converge");
}

}  // namespace

std::optional<GammaParams> fit_gamma(const ContactStats& stats) {
  if (!(stats.mean_duration > 0))
    throw std::domain_error("fit_gamma: mean duration must be > 0");
  if (stats.var_duration < 0)
    throw std::domain_error("fit_gamma: variance must be >= 0");
  if (stats.var_duration == 0.0) return std::nullopt;
  const double m = stats.mean_duration;
  const double i = stats.var_duration;
  return GammaParams{m * m / i, i / m};
}

double regularized_lower_incomplete_gamma(double shape, double x) {
  if (!(shape > 0) || !std::isfinite(shape))
    throw std::domain_error("regularized incomplete gamma: shape must be > 0");
  if (x < 0 || !std::isfinite(x))
    throw std::domain_error("regularized incomplete gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double p = x < shape + 1.0 ? lower_series(shape, x)
                                   : 1.0 - upper_continued_fraction(shape, x);
  return std::clamp(p, 0.0, 1.0);
}

double contact_pdf(const GammaParams& params, double x) {
  if (!(params.shape > 0) || !(params.scale > 0))
    throw std::domain_error("contact_pdf: invalid gamma parameters");
  if (x < 0) throw std::domain_error("contact_pdf: x must be >= 0");
  if (x == 0.0) {
    if (params.shape > 1.0) return 0.0;
    if (params.shape == 1.0) return 1.0 / params.scale;
    return std::numeric_limits<double>::infinity();
  }
  const double log_pdf = (params.shape - 1.0) * std::log(x) -
                         x / params.scale -
                         params.shape * std::log(params.scale) -
                         std::lgamma(params.shape);
  return std::exp(log_pdf);
}

double closeness(const GammaParams& params, double x_min) {
  if (x_min < 0) throw std::domain_error("closeness: x_min must be >= 0");
  const double p =
      regularized_lower_incomplete_gamma(params.shape, x_min / params.scale);
  return std::clamp(1.0 - p, 0.0, 1.0);
}

double closeness_step(double mean_duration, double x_min) {
  if (x_min < 0) throw std::domain_error("closeness: x_min must be >= 0");
  return mean_duration >= x_min ? 1.0 : 0.0;
}

double closeness_from_stats(const ContactStats& stats, double x_min) {
  const auto params = fit_gamma(stats);
  if (!params) return closeness_step(stats.mean_duration, x_min);
  return closeness(*params, x_min);
}

ClosenessGraph build_closeness_graph(
    const std::map<PairKey, ContactStats>& stats, double x_min,
    std::size_t n_min) {
  if (x_min < 0)
    throw std::domain_error("build_closeness_graph: x_min must be >= 0");
  if (n_min < 1)
    throw std::domain_error("build_closeness_graph: n_min must be >= 1");
  ClosenessGraph graph;
  for (const auto& [pair, st] : stats) {
    graph.nodes.insert(pair.first);
    graph.nodes.insert(pair.second);
    if (st.n_encounters < n_min) continue;
    graph.edges.emplace(pair, closeness_from_stats(st, x_min));
  }
  return graph;
}

bool OffsnPartition::is_white(const std::string& node) const {
  return std::binary_search(white_nodes.begin(), white_nodes.end(), node);
}

int OffsnPartition::cluster_of(const std::string& node) const {
  for (std::size_t i = 0; i < clusters.size(); ++i)
    if (std::binary_search(clusters[i].begin(), clusters[i].end(), node))
      return static_cast<int>(i);
  return -1;
}

OffsnPartition build_offsn(const ClosenessGraph& graph, double w_threshold) {
  if (!(w_threshold >= 0.0 && w_threshold <= 1.0))
    throw std::domain_error("build_offsn: w_T must be in [0,1]");

  std::map<std::string, std::vector<std::string>> adjacency;
  for (const auto& node : graph.nodes) adjacency[node];
  for (const auto& [pair, w] : graph.edges) {
    if (w < w_threshold) continue;
    adjacency[pair.first].push_back(pair.second);
    adjacency[pair.second].push_back(pair.first);
  }

  OffsnPartition partition;
  partition.threshold = w_threshold;
  std::set<std::string> visited;
  for (const auto& [start, _] : adjacency) {
    if (visited.count(start)) continue;
    std::vector<std::string> component;
    std::deque<std::string> queue{start};
    visited.insert(start);
    while (!queue.empty()) {
      std::string node = queue.front();
      queue.pop_front();
      component.push_back(node);
      for (const auto& next : adjacency[node])
        if (visited.insert(next).second) queue.push_back(next);
    }
    std::sort(component.begin(), component.end());
    if (component.size() >= 2)
      partition.clusters.push_back(std::move(component));
    else
      partition.white_nodes.push_back(component.front());
  }
  std::sort(partition.white_nodes.begin(), partition.white_nodes.end());
  std::sort(partition.clusters.begin(), partition.clusters.end());
  return partition;
}

}  // namespace d2dsim
