#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>

#include "d2dsim/config.hpp"
#include "d2dsim/ibp.hpp"
#include "d2dsim/offload.hpp"
#include "d2dsim/social.hpp"
#include "d2dsim/tail.hpp"
#include "d2dsim/trace.hpp"

namespace py = pybind11;

namespace {

py::dict metrics_to_dict(const d2dsim::RunMetrics& m) {
  py::dict d;
  d["enb_sum_rate"] = m.enb_sum_rate;
  d["d2d_sum_rate"] = m.d2d_sum_rate;
  d["offloaded_fraction"] = m.offloaded_fraction;
  d["mean_utility"] = m.mean_utility();
  d["utility_per_user"] = m.utility_per_user;
  py::dict counts;
  counts["d2d_success"] = m.counts.d2d_success;
  counts["d2d_fail_fallback"] = m.counts.d2d_fail_fallback;
  counts["cellular_new"] = m.counts.cellular_new;
  counts["cellular_white_area"] = m.counts.cellular_white_area;
  d["counts"] = counts;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Social-network-enhanced D2D offloading simulator core";

  // Contact model and social graph.
  m.def(
      "reg_lower_inc_gamma",
      [](double shape, double x) {
        return d2dsim::regularized_lower_incomplete_gamma(shape, x);
      },
      py::arg("shape"), py::arg("x"),
      "Regularized lower incomplete gamma P(shape, x)");
  m.def(
      "fit_gamma",
      [](double mean, double variance) -> std::optional<std::pair<double, double>> {
        d2dsim::ContactStats stats;
        stats.n_encounters = 2;
        stats.mean_duration = mean;
        stats.var_duration = variance;
        const auto fit = d2dsim::fit_gamma(stats);
        if (!fit) return std::nullopt;
        return std::make_pair(fit->shape, fit->scale);
      },
      py::arg("mean"), py::arg("variance"),
      "Method-of-moments gamma fit (shape, scale); None when variance is 0");
  m.def(
      "closeness",
      [](double shape, double scale, double x_min) {
        return d2dsim::closeness(d2dsim::GammaParams{shape, scale}, x_min);
      },
      py::arg("shape"), py::arg("scale"), py::arg("x_min"),
      "Probability that a contact lasts at least x_min");

  // IBP.
  m.def("expected_old_count", &d2dsim::expected_old_count, py::arg("alpha"),
        py::arg("n"));
  m.def(
      "ibp_replay_old_counts",
      [](double alpha, std::size_t n, std::size_t n_samples,
         std::uint64_t seed) {
        d2dsim::Rng rng(seed);
        std::vector<long long> out;
        out.reserve(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i)
          out.push_back(d2dsim::replay_ibp_user(alpha, n, rng).old_count);
        return out;
      },
      py::arg("alpha"), py::arg("n"), py::arg("n_samples"), py::arg("seed"),
      "m_n^h draws from fresh seeded IBP replays");

  // Tail analysis.
  m.def("chernoff_lower", &d2dsim::chernoff_lower, py::arg("mu"),
        py::arg("delta"));
  m.def("chernoff_upper", &d2dsim::chernoff_upper, py::arg("mu"),
        py::arg("delta"));
  m.def(
      "saddlepoint_pmf",
      [](double mu1, double mu2, long long k) {
        return d2dsim::saddlepoint_pmf(d2dsim::TailParams{mu1, mu2}, k);
      },
      py::arg("mu1"), py::arg("mu2"), py::arg("k"));
  m.def(
      "saddlepoint_cdf",
      [](double mu1, double mu2, long long m) {
        return d2dsim::saddlepoint_cdf(d2dsim::TailParams{mu1, mu2}, m);
      },
      py::arg("mu1"), py::arg("mu2"), py::arg("m"));
  m.def(
      "exact_skellam_pmf",
      [](double mu1, double mu2, long long k) {
        return d2dsim::exact_skellam_pmf(d2dsim::TailParams{mu1, mu2}, k);
      },
      py::arg("mu1"), py::arg("mu2"), py::arg("k"));
  m.def(
      "exact_skellam_cdf",
      [](double mu1, double mu2, long long k) {
        return d2dsim::exact_skellam_cdf(d2dsim::TailParams{mu1, mu2}, k);
      },
      py::arg("mu1"), py::arg("mu2"), py::arg("k"));
  m.def(
      "build_table",
      [](double alpha, std::size_t n, std::size_t n_samples,
         std::uint64_t seed) {
        d2dsim::Rng rng(seed);
        const auto table = d2dsim::build_table(alpha, n, n_samples, rng);
        py::dict d;
        d["support"] = table.support;
        d["sp_pmf"] = table.saddlepoint_pmf;
        d["sp_cdf"] = table.saddlepoint_cdf;
        d["exact_pmf"] = table.exact_pmf;
        d["exact_cdf"] = table.exact_cdf;
        d["empirical_cdf"] = table.empirical_cdf;
        d["bound_on_cdf"] = table.bound_on_cdf;
        d["saddlepoint_normalization_deficit"] =
            table.saddlepoint_normalization_deficit;
        d["excluded_negative_mass"] = table.excluded_negative_mass;
        return d;
      },
      py::arg("alpha"), py::arg("n"), py::arg("n_samples"), py::arg("seed"));

  // Simulation.
  m.def(
      "run_simulation",
      [](const std::string& config_json) {
        const auto config = d2dsim::config_from_json_string(config_json);
        return metrics_to_dict(d2dsim::run_simulation(config));
      },
      py::arg("config_json"),
      "Run one simulation from a JSON config string");
  m.def(
      "sweep",
      [](const std::string& config_json, const std::string& param,
         const std::vector<double>& values, std::size_t reps) {
        const auto config = d2dsim::config_from_json_string(config_json);
        const auto rows = d2dsim::sweep(
            config, d2dsim::sweep_param_from_name(param), values, reps);
        py::list out;
        for (const auto& row : rows) {
          py::dict d = metrics_to_dict(row.metrics);
          d["param_value"] = row.param_value;
          d["seed"] = row.seed;
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("config_json"), py::arg("param"), py::arg("values"),
      py::arg("reps"));

#ifdef D2DSIM_VERSION
  m.attr("__version__") = D2DSIM_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
