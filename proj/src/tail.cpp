#include "d2dsim/tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "d2dsim/ibp.hpp"

namespace d2dsim {

namespace {

double log_poisson_pmf(double lambda, long long k) {
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (lambda == 0.0)
    return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  const double kd = static_cast<double>(k);
  return kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0);
}

// Internal evaluation that also accepts the delta = 1 endpoint, where
// (1-d) log(1-d) -> 0 and the bound degenerates to e^{-mu}.
double log_chernoff_lower_limit(double mu, double delta) {
  if (delta == 1.0) return -mu;
  return mu * (-delta - (1.0 - delta) * std::log1p(-delta));
}

}  // namespace

void TailParams::validate() const {
  if (!(mu1 > 0) || !(mu2 > 0))
    throw std::domain_error("TailParams: mu1 and mu2 must be > 0");
}

double log_chernoff_lower(double mu, double delta) {
  if (!(mu > 0)) throw std::domain_error("chernoff_lower: mu must be > 0");
  if (!(delta > 0) || delta >= 1.0)
    throw std::domain_error("chernoff_lower: delta must be in (0,1)");
  return log_chernoff_lower_limit(mu, delta);
}

double log_chernoff_upper(double mu, double delta) {
  if (!(mu > 0)) throw std::domain_error("chernoff_upper: mu must be > 0");
  if (!(delta > 0)) throw std::domain_error("chernoff_upper: delta must be > 0");
  return mu * (delta - (1.0 + delta) * std::log1p(delta));
}

double chernoff_lower(double mu, double delta) {
  return std::exp(log_chernoff_lower(mu, delta));
}

double chernoff_upper(double mu, double delta) {
  return std::exp(log_chernoff_upper(mu, delta));
}

SaddlepointTerms saddlepoint_terms(const TailParams& params, long long k) {
  params.validate();
  // Long double keeps the C - D = k and C*D = mu1*mu2 identities well
  // inside 1e-12 even for large |k|.
  const long double kd = static_cast<long double>(k);
  const long double m = static_cast<long double>(params.mu1) *
                        static_cast<long double>(params.mu2);
  const long double root = std::sqrt(kd * kd + 4.0L * m);
  return SaddlepointTerms{static_cast<double>((kd + root) / 2.0L),
                          static_cast<double>(2.0L * m / (kd + root))};
}

double saddlepoint_log_pmf(const TailParams& params, long long k) {
  const auto [c, d] = saddlepoint_terms(params, k);
  const double kd = static_cast<double>(k);
  return -0.5 * std::log(2.0 * std::numbers::pi * (c + d)) -
         (params.mu1 + params.mu2) + c + d + kd * std::log(d / params.mu2);
}

double saddlepoint_pmf(const TailParams& params, long long k) {
  return std::exp(saddlepoint_log_pmf(params, k));
}

double saddlepoint_cdf(const TailParams& params, long long m) {
  params.validate();
  if (m < 0) return 0.0;
  double sum = 0.0;
  for (long long k = 0; k <= m; ++k) sum += saddlepoint_pmf(params, k);
  return std::clamp(sum, 0.0, 1.0);
}

double exact_skellam_pmf(const TailParams& params, long long k) {
  params.validate();
  // Convolution index i runs over the Poisson(mu2) component; the product
  // term peaks near i* = D(k), so the cap of mode + 15 sigma + 60 leaves a
  // truncation error far below 1e-12.
  const double kd = static_cast<double>(k);
  const double root = std::sqrt(kd * kd + 4.0 * params.mu1 * params.mu2);
  const double mode = (-kd + root) / 2.0;
  const double spread = std::max({mode, params.mu2, 4.0});
  const long long i_begin = std::max(0LL, -k);
  const long long i_end = static_cast<long long>(
      std::ceil(std::max(mode, params.mu2) + 15.0 * std::sqrt(spread) + 60.0));
  double sum = 0.0;
  for (long long i = i_begin; i <= i_end; ++i) {
    sum += std::exp(log_poisson_pmf(params.mu1, i + k) +
                    log_poisson_pmf(params.mu2, i));
  }
  return sum;
}

double exact_skellam_cdf(const TailParams& params, long long k) {
  params.validate();
  const double sigma = std::sqrt(params.mu1 + params.mu2);
  const long long lo = static_cast<long long>(
      std::floor(params.mu() - 15.0 * sigma - 60.0));
  if (k < lo) return 0.0;
  double sum = 0.0;
  for (long long j = lo; j <= k; ++j) sum += exact_skellam_pmf(params, j);
  return std::min(sum, 1.0);
}

std::vector<BoundViolation> chernoff_dominance_scan(const TailParams& params,
                                                    int grid_points) {
  params.validate();
  if (grid_points < 1)
    throw std::domain_error("dominance scan: grid_points must be >= 1");
  const double mu = params.mu();
  std::vector<BoundViolation> violations;
  for (int i = 1; i <= grid_points; ++i) {
    const double delta =
        static_cast<double>(i) / static_cast<double>(grid_points + 1);
    // P{S < (1-delta) mu} over integer support.
    const double low_threshold = (1.0 - delta) * mu;
    const long long k_low =
        static_cast<long long>(std::ceil(low_threshold)) - 1;
    const double p_low = exact_skellam_cdf(params, k_low);
    const double b_low = chernoff_lower(mu, delta);
    if (p_low > b_low)
      violations.push_back(BoundViolation{delta, p_low, b_low, true});
    // P{S > (1+delta) mu}.
    const double high_threshold = (1.0 + delta) * mu;
    const double p_high =
        1.0 - exact_skellam_cdf(
                  params, static_cast<long long>(std::floor(high_threshold)));
    const double b_high = chernoff_upper(mu, delta);
    if (p_high > b_high)
      violations.push_back(BoundViolation{delta, p_high, b_high, false});
  }
  return violations;
}

double EmpiricalCdf::at(long long x) const {
  if (cdf.empty()) return 0.0;
  if (x < min_value) return 0.0;
  const long long offset = x - min_value;
  if (offset >= static_cast<long long>(cdf.size())) return 1.0;
  return cdf[static_cast<std::size_t>(offset)];
}

EmpiricalCdf empirical_cdf(const std::vector<long long>& samples) {
  if (samples.empty())
    throw std::domain_error("empirical_cdf: samples must be nonempty");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  EmpiricalCdf out;
  out.min_value = *lo_it;
  const std::size_t width = static_cast<std::size_t>(*hi_it - *lo_it) + 1;
  std::vector<double> counts(width, 0.0);
  for (long long s : samples)
    counts[static_cast<std::size_t>(s - out.min_value)] += 1.0;
  out.cdf.resize(width);
  double acc = 0.0;
  for (std::size_t i = 0; i < width; ++i) {
    acc += counts[i];
    out.cdf[i] = acc / static_cast<double>(samples.size());
  }
  return out;
}

long long sample_model_old_count(double alpha, std::size_t n, Rng& rng) {
  if (!(alpha > 0)) throw std::domain_error("alpha must be > 0");
  if (n < 1) throw std::domain_error("n must be >= 1");
  const long long total = rng.poisson(alpha);
  const long long fresh = rng.poisson(alpha / static_cast<double>(n));
  return total - fresh;
}

IbpUserDraw replay_ibp_user(double alpha, std::size_t n, Rng& rng) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  IbpState state(alpha);
  SelectionOutcome outcome;
  for (std::size_t i = 0; i < n; ++i) outcome = state.select_next(rng);
  IbpUserDraw draw;
  draw.total = static_cast<long long>(outcome.total());
  draw.fresh = static_cast<long long>(outcome.new_count());
  draw.old_count = draw.total - draw.fresh;
  return draw;
}

DistributionTable build_table(double alpha, std::size_t n,
                              std::size_t n_samples, Rng& rng) {
  if (!(alpha > 0)) throw std::domain_error("build_table: alpha must be > 0");
  if (n < 2) throw std::domain_error("build_table: n must be >= 2");
  if (n_samples < 1)
    throw std::domain_error("build_table: n_samples must be >= 1");

  const TailParams params{alpha, alpha / static_cast<double>(n)};
  const double mu = params.mu();
  const double sigma = std::sqrt(params.mu1 + params.mu2);
  const long long k_max = static_cast<long long>(
      std::ceil(std::max(2.0 * params.mu1, mu + 10.0 * sigma)));

  DistributionTable table;
  table.support.reserve(static_cast<std::size_t>(k_max) + 1);
  for (long long k = 0; k <= k_max; ++k) table.support.push_back(k);
  const std::size_t width = table.support.size();

  std::vector<long long> samples;
  samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i)
    samples.push_back(replay_ibp_user(alpha, n, rng).old_count);
  const EmpiricalCdf emp = empirical_cdf(samples);

  table.saddlepoint_pmf.resize(width);
  table.saddlepoint_cdf.resize(width);
  table.exact_pmf.resize(width);
  table.exact_cdf.resize(width);
  table.empirical_cdf.resize(width);
  table.chernoff_lower_curve.assign(width,
                                    std::numeric_limits<double>::quiet_NaN());
  table.chernoff_upper_curve.assign(width,
                                    std::numeric_limits<double>::quiet_NaN());
  table.bound_on_cdf.resize(width);

  double sp_sum = 0.0;
  double exact_sum_from_zero = 0.0;
  for (std::size_t i = 0; i < width; ++i) {
    const long long k = table.support[i];
    sp_sum += saddlepoint_pmf(params, k);
    table.saddlepoint_pmf[i] = saddlepoint_pmf(params, k);
    table.saddlepoint_cdf[i] = std::clamp(sp_sum, 0.0, 1.0);
    table.exact_pmf[i] = exact_skellam_pmf(params, k);
    exact_sum_from_zero += table.exact_pmf[i];
    table.exact_cdf[i] = exact_skellam_cdf(params, k);
    table.empirical_cdf[i] = emp.at(k);

    const double x = static_cast<double>(k);
    const double delta = std::fabs(mu - x) / mu;
    if (x < mu) {
      const double bound = std::exp(log_chernoff_lower_limit(mu, delta));
      table.chernoff_lower_curve[i] = bound;
      table.bound_on_cdf[i] = bound;
    } else if (x > mu) {
      const double bound = std::exp(log_chernoff_upper(mu, delta));
      table.chernoff_upper_curve[i] = bound;
      table.bound_on_cdf[i] = 1.0 - bound;
    } else {
      table.bound_on_cdf[i] = 1.0;  // delta = 0: both bounds degenerate to 1
    }
  }

  // Saddlepoint tail beyond the grid, so the reported deficit reflects the
  // whole k >= 0 axis rather than the plotting window.
  double sp_tail = 0.0;
  for (long long k = k_max + 1; k <= k_max + 20 * static_cast<long long>(sigma) + 200; ++k) {
    const double term = saddlepoint_pmf(params, k);
    sp_tail += term;
    if (term < 1e-18) break;
  }
  table.saddlepoint_normalization_deficit = 1.0 - (sp_sum + sp_tail);
  table.excluded_negative_mass = exact_skellam_cdf(params, -1);
  return table;
}

}  // namespace d2dsim
