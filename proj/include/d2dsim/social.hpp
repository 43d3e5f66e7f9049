#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "d2dsim/trace.hpp"

namespace d2dsim {

// Gamma contact-duration model, method-of-moments parameterization:
// shape = M^2/I, scale = I/M.
struct GammaParams {
  double shape = 0.0;  // k > 0
  double scale = 0.0;  // theta > 0, seconds
};

// Method-of-moments fit from per-pair statistics. Returns nullopt for the
// degenerate zero-variance case, where callers fall back to the step rule.
std::optional<GammaParams> fit_gamma(const ContactStats& stats);

// Regularized lower incomplete gamma P(k, x) = gamma(k, x) / Gamma(k).
// Series expansion for x < k+1, continued fraction otherwise.
double regularized_lower_incomplete_gamma(double shape, double x);

// Gamma pdf f(x; k, theta). Returns +inf at x = 0 when k < 1.
double contact_pdf(const GammaParams& params, double x);

// Closeness weight w = 1 - P(k, x_min/theta): the probability that a
// contact lasts long enough to transfer one content package.
double closeness(const GammaParams& params, double x_min);

// Step rule for a degenerate (zero-variance) fit with mean duration M:
// w = 1 if M >= x_min, else 0.
double closeness_step(double mean_duration, double x_min);

// Fits the pair's duration model and evaluates closeness, using the step
// rule whenever the fit is degenerate.
double closeness_from_stats(const ContactStats& stats, double x_min);

// Weighted social graph over UE identifiers. Weights live in [0,1] and are
// symmetric by construction (edges keyed on canonical pairs).
struct ClosenessGraph {
  std::set<std::string> nodes;
  std::map<PairKey, double> edges;

  // Weight lookup; absent edges count as 0.
  double weight(const std::string& a, const std::string& b) const {
    auto it = edges.find(PairKey::canonical(a, b));
    return it == edges.end() ? 0.0 : it->second;
  }
};

// Builds the closeness graph from contact statistics. Pairs with fewer than
// n_min encounters get no edge.
ClosenessGraph build_closeness_graph(
    const std::map<PairKey, ContactStats>& stats, double x_min,
    std::size_t n_min);

// Partition of the node set into OffSN clusters (connected components of
// size >= 2 of the w >= w_T subgraph) and white-area nodes.
struct OffsnPartition {
  std::vector<std::vector<std::string>> clusters;  // members sorted
  std::vector<std::string> white_nodes;            // sorted
  double threshold = 0.0;

  bool is_white(const std::string& node) const;
  // Index of the cluster containing `node`, or -1 for white/unknown nodes.
  int cluster_of(const std::string& node) const;
};

OffsnPartition build_offsn(const ClosenessGraph& graph, double w_threshold);

}  // namespace d2dsim
