#include <stdexcept>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "d2dsim/rng.hpp"
#include "d2dsim/social.hpp"
#include "support/quadrature.hpp"

using namespace d2dsim;

namespace {

ContactStats stats_of(double mean, double var, std::size_t n = 10) {
  ContactStats st;
  st.pair = PairKey::canonical("a", "b");
  st.n_encounters = n;
  st.mean_duration = mean;
  st.var_duration = var;
  return st;
}

}  // namespace

TEST_CASE("method-of-moments fit") {
  const auto fit = fit_gamma(stats_of(3.0, 1.0));
  REQUIRE(fit.has_value());
  CHECK(fit->shape == doctest::Approx(9.0));
  CHECK(fit->scale == doctest::Approx(1.0 / 3.0));

  // Exponential special case k = 1.
  const auto exp_fit = fit_gamma(stats_of(10.0, 100.0));
  REQUIRE(exp_fit.has_value());
  CHECK(exp_fit->shape == doctest::Approx(1.0));
  CHECK(exp_fit->scale == doctest::Approx(10.0));

  // Zero variance degenerates.
  CHECK_FALSE(fit_gamma(stats_of(120.0, 0.0)).has_value());
  CHECK_THROWS_AS(fit_gamma(stats_of(0.0, 1.0)), std::domain_error);
}

TEST_CASE("incomplete gamma basic values") {
  CHECK(regularized_lower_incomplete_gamma(3.0, 0.0) == 0.0);
  CHECK(regularized_lower_incomplete_gamma(1.0, 1.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(regularized_lower_incomplete_gamma(0.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(regularized_lower_incomplete_gamma(1.0, -1.0),
                  std::domain_error);
}

TEST_CASE("incomplete gamma matches the quadrature oracle to 1e-10") {
  // 100-point grid spanning k in [1e-2, 1e4] and x up to 1e6.
  const std::vector<double> shapes = {0.01, 0.1, 0.5, 1.0,  2.0,
                                      9.0,  50.0, 300.0, 2000.0, 10000.0};
  int points = 0;
  for (double k : shapes) {
    const double s = std::sqrt(k);
    const std::vector<double> xs = {0.0,
                                    0.1 * k,
                                    0.5 * k,
                                    std::max(0.0, k - 2.0 * s),
                                    k,
                                    k + 1.0,
                                    k + 2.0 * s,
                                    2.0 * k + 1.0,
                                    5.0 * k + 10.0,
                                    std::min(1e6, 30.0 * k + 100.0)};
    for (double x : xs) {
      ++points;
      const double mine = regularized_lower_incomplete_gamma(k, x);
      const double oracle = static_cast<double>(
          testsupport::reg_lower_inc_gamma_oracle(k, x));
      CHECK_MESSAGE(std::fabs(mine - oracle) <= 1e-10,
                    "k=", k, " x=", x, " mine=", mine, " oracle=", oracle);
    }
  }
  CHECK(points == 100);
}

TEST_CASE("incomplete gamma P(9,9) against quadrature") {
  const double oracle =
      static_cast<double>(testsupport::reg_lower_inc_gamma_oracle(9.0L, 9.0L));
  CHECK(std::fabs(regularized_lower_incomplete_gamma(9.0, 9.0) - oracle) <=
        1e-10);
}

TEST_CASE("incomplete gamma is monotone in x") {
  double prev = 0.0;
  for (double x = 0.0; x <= 40.0; x += 0.25) {
    const double p = regularized_lower_incomplete_gamma(7.3, x);
    CHECK(p >= prev);
    CHECK(p <= 1.0);
    prev = p;
  }
}

TEST_CASE("contact pdf values and normalization") {
  CHECK(contact_pdf(GammaParams{1.0, 1.0}, 0.0) == doctest::Approx(1.0));
  CHECK(contact_pdf(GammaParams{2.0, 1.0}, 0.0) == 0.0);
  CHECK_THROWS_AS(contact_pdf(GammaParams{2.0, 1.0}, -0.1), std::domain_error);

  const GammaParams params{9.0, 1.0 / 3.0};
  auto pdf = [&](long double x) {
    return static_cast<long double>(contact_pdf(params, static_cast<double>(x)));
  };
  const long double integral =
      testsupport::tanh_sinh_panels(pdf, {0.0L, 1.0L, 3.0L, 50.0L / 3.0L});
  CHECK(static_cast<double>(integral) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("closeness closed forms") {
  // Zero threshold always qualifies.
  CHECK(closeness(GammaParams{3.7, 2.2}, 0.0) == doctest::Approx(1.0));
  // Exponential tail: k=1, theta=10, x_min=10 -> e^{-1}.
  CHECK(closeness(GammaParams{1.0, 10.0}, 10.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(closeness(GammaParams{1.0, 1.0}, -1.0), std::domain_error);
}

TEST_CASE("degenerate fit uses the step rule") {
  CHECK(closeness_from_stats(stats_of(120.0, 0.0), 100.0) == 1.0);
  CHECK(closeness_from_stats(stats_of(120.0, 0.0), 120.0) == 1.0);
  CHECK(closeness_from_stats(stats_of(120.0, 0.0), 121.0) == 0.0);
}

TEST_CASE("closeness is nonincreasing in x_min and 1 at zero") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const GammaParams params{rng.uniform(0.2, 15.0), rng.uniform(0.1, 40.0)};
    double prev = closeness(params, 0.0);
    CHECK(prev == doctest::Approx(1.0));
    for (double x = 1.0; x < 200.0; x *= 1.7) {
      const double w = closeness(params, x);
      CHECK(w <= prev + 1e-12);
      CHECK(w >= 0.0);
      prev = w;
    }
  }
}

TEST_CASE("gamma fit round-trips on sampled data") {
  // Method-of-moments recovery within 5% relative error at N = 1e5.
  for (double shape : {0.5, 2.0, 9.0, 20.0}) {
    for (double scale : {0.1, 10.0, 100.0}) {
      Rng rng(1000 + static_cast<std::uint64_t>(shape * 10 + scale));
      const std::size_t n = 100000;
      std::vector<EncounterRecord> records;
      records.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double d = rng.gamma(shape, scale);
        records.push_back({"a", "b", 0.0, d});
      }
      const auto stats = aggregate_contacts(records).begin()->second;
      const auto fit = fit_gamma(stats);
      REQUIRE(fit.has_value());
      CHECK(fit->shape == doctest::Approx(shape).epsilon(0.05));
      CHECK(fit->scale == doctest::Approx(scale).epsilon(0.05));
    }
  }
}

TEST_CASE("graph construction applies the encounter filter") {
  std::map<PairKey, ContactStats> stats;
  auto add = [&](const std::string& a, const std::string& b, std::size_t n,
                 double mean, double var) {
    const auto key = PairKey::canonical(a, b);
    stats[key] = ContactStats{key, n, mean, var};
  };
  add("a", "b", 5, 3.0, 1.0);
  add("b", "c", 1, 3.0, 1.0);  // below n_min

  const auto graph = build_closeness_graph(stats, 0.0, 2);
  CHECK(graph.nodes.size() == 3);  // filtered pairs still contribute nodes
  CHECK(graph.edges.size() == 1);
  CHECK(graph.weight("a", "b") == doctest::Approx(1.0));
  CHECK(graph.weight("b", "c") == 0.0);

  CHECK(build_closeness_graph({}, 0.0, 2).edges.empty());
}

TEST_CASE("offsn clustering on the worked example") {
  ClosenessGraph graph;
  for (const char* n : {"a", "b", "c", "d", "e"}) graph.nodes.insert(n);
  graph.edges[PairKey::canonical("a", "b")] = 0.9;
  graph.edges[PairKey::canonical("b", "c")] = 0.9;
  graph.edges[PairKey::canonical("d", "e")] = 0.2;

  const auto partition = build_offsn(graph, 0.5);
  REQUIRE(partition.clusters.size() == 1);
  CHECK(partition.clusters[0] == std::vector<std::string>{"a", "b", "c"});
  CHECK(partition.white_nodes == std::vector<std::string>{"d", "e"});
  CHECK(partition.threshold == 0.5);
  CHECK(partition.cluster_of("b") == 0);
  CHECK(partition.is_white("d"));
}

TEST_CASE("offsn edge thresholds") {
  ClosenessGraph graph;
  for (const char* n : {"a", "b", "c"}) graph.nodes.insert(n);
  graph.edges[PairKey::canonical("a", "b")] = 0.4;
  graph.edges[PairKey::canonical("b", "c")] = 0.6;

  // w_T = 0 on a connected graph keeps one cluster.
  const auto all = build_offsn(graph, 0.0);
  CHECK(all.clusters.size() == 1);
  CHECK(all.white_nodes.empty());

  // w_T = 1 with all weights < 1 turns every node white.
  const auto none = build_offsn(graph, 1.0);
  CHECK(none.clusters.empty());
  CHECK(none.white_nodes.size() == 3);

  CHECK_THROWS_AS(build_offsn(graph, 1.5), std::domain_error);
}

TEST_CASE("raising the threshold only refines the partition") {
  Rng rng(77);
  ClosenessGraph graph;
  const int n_nodes = 12;
  std::vector<std::string> names;
  for (int i = 0; i < n_nodes; ++i) names.push_back("n" + std::to_string(i));
  for (const auto& name : names) graph.nodes.insert(name);
  for (int i = 0; i < n_nodes; ++i)
    for (int j = i + 1; j < n_nodes; ++j)
      if (rng.bernoulli(0.45))
        graph.edges[PairKey::canonical(names[i], names[j])] = rng.uniform01();

  auto cluster_id = [](const OffsnPartition& p, const std::string& node) {
    return p.cluster_of(node);
  };

  const std::vector<double> thresholds = {0.0, 0.2, 0.5, 0.8, 1.0};
  for (std::size_t t = 0; t + 1 < thresholds.size(); ++t) {
    const auto coarse = build_offsn(graph, thresholds[t]);
    const auto fine = build_offsn(graph, thresholds[t + 1]);
    // Any two nodes together in a fine cluster are together in the coarse one.
    for (const auto& cluster : fine.clusters) {
      for (std::size_t i = 1; i < cluster.size(); ++i) {
        CHECK(cluster_id(coarse, cluster[0]) >= 0);
        CHECK(cluster_id(coarse, cluster[0]) ==
              cluster_id(coarse, cluster[i]));
      }
    }
  }

  // Every threshold yields an exact disjoint cover of the node set.
  for (double t : thresholds) {
    const auto partition = build_offsn(graph, t);
    std::set<std::string> seen;
    std::size_t total = 0;
    for (const auto& cluster : partition.clusters) {
      CHECK(cluster.size() >= 2);
      for (const auto& node : cluster) {
        CHECK(seen.insert(node).second);
        ++total;
      }
    }
    for (const auto& node : partition.white_nodes) {
      CHECK(seen.insert(node).second);
      ++total;
    }
    CHECK(total == graph.nodes.size());
  }
}
