#pragma once

#include <cstdint>
#include <vector>

#include "d2dsim/rng.hpp"

namespace d2dsim {

// Poisson means of the total (m_n) and new (m_n^0) content counts; the
// old-content mean is their difference mu = mu1 - mu2 = (n-1) alpha / n.
struct TailParams {
  double mu1 = 0.0;
  double mu2 = 0.0;

  double mu() const { return mu1 - mu2; }

  void validate() const;
};

// Multiplicative Chernoff bounds for a variable with mean mu, evaluated in
// log space. The lower-tail bound [e^{-d}/(1-d)^{1-d}]^mu requires d < 1;
// the upper-tail bound [e^{d}/(1+d)^{1+d}]^mu accepts any d > 0.
double log_chernoff_lower(double mu, double delta);
double log_chernoff_upper(double mu, double delta);
double chernoff_lower(double mu, double delta);
double chernoff_upper(double mu, double delta);

// Saddlepoint approximation of the Skellam pmf, with
// C = (k + sqrt(k^2 + 4 mu1 mu2)) / 2 and D = mu1 mu2 / C.
struct SaddlepointTerms {
  double c = 0.0;
  double d = 0.0;
};
SaddlepointTerms saddlepoint_terms(const TailParams& params, long long k);
double saddlepoint_log_pmf(const TailParams& params, long long k);
double saddlepoint_pmf(const TailParams& params, long long k);

// Saddlepoint CDF: the pmf summed from k = 0 (negative support excluded by
// construction), clamped to [0,1]. m < 0 returns 0.
double saddlepoint_cdf(const TailParams& params, long long m);

// Ground-truth Skellam pmf P(X - Y = k), X~Poisson(mu1), Y~Poisson(mu2),
// by truncated convolution with truncation error below 1e-12.
double exact_skellam_pmf(const TailParams& params, long long k);
double exact_skellam_cdf(const TailParams& params, long long k);

// Where the exact Skellam tails exceed the Chernoff bounds. The bounds are
// stated for sums of independent trials; applied to a Poisson difference
// they can fail, so violations are measured and reported rather than
// corrected away.
struct BoundViolation {
  double delta = 0.0;
  double tail_probability = 0.0;
  double bound = 0.0;
  bool lower_tail = false;

  double excess() const { return tail_probability - bound; }
};

// Scans delta over {i/(grid_points+1)}, i = 1..grid_points (the default 99
// gives 0.01, ..., 0.99); both tails evaluated against the exact convolution.
std::vector<BoundViolation> chernoff_dominance_scan(const TailParams& params,
                                                    int grid_points = 99);

// Step-function empirical CDF on the integer grid spanning the samples.
struct EmpiricalCdf {
  long long min_value = 0;
  std::vector<double> cdf;  // cdf[i] = F(min_value + i)

  long long max_value() const {
    return min_value + static_cast<long long>(cdf.size()) - 1;
  }
  // F(x) with the step convention: 0 below the range, 1 above it.
  double at(long long x) const;
};

EmpiricalCdf empirical_cdf(const std::vector<long long>& samples);

// One draw of m_n^h under the difference-of-Poissons analysis model:
// independent Poisson(alpha) minus Poisson(alpha/n) (may be negative).
long long sample_model_old_count(double alpha, std::size_t n, Rng& rng);

// One draw of (m_n, m_n^0, m_n^h) from a fresh n-user IBP replay.
struct IbpUserDraw {
  long long total = 0;
  long long fresh = 0;
  long long old_count = 0;
};
IbpUserDraw replay_ibp_user(double alpha, std::size_t n, Rng& rng);

// All distribution columns on a common integer grid, for the bound/CDF
// comparison plots. Chernoff values are mapped onto the CDF axis via
// delta(x) = |mu - x| / mu; the bound_on_cdf column is the lower-tail bound
// below mu (an upper bound on F) and 1 - upper-tail bound above mu (a lower
// bound on F), with the delta -> 0 and delta -> 1 limits at the ends.
struct DistributionTable {
  std::vector<long long> support;
  std::vector<double> saddlepoint_pmf;
  std::vector<double> saddlepoint_cdf;
  std::vector<double> exact_pmf;
  std::vector<double> exact_cdf;
  std::vector<double> empirical_cdf;
  std::vector<double> chernoff_lower_curve;  // NaN at and above mu
  std::vector<double> chernoff_upper_curve;  // NaN at and below mu
  std::vector<double> bound_on_cdf;

  // Saddlepoint mass missing from k >= 0 relative to 1 (negative-support
  // mass plus approximation error); reported, never renormalized away.
  double saddlepoint_normalization_deficit = 0.0;
  // Exact Skellam mass on k < 0 that the from-zero summation excludes.
  double excluded_negative_mass = 0.0;
};

// Builds the table for mu1 = alpha, mu2 = alpha/n. The empirical column
// comes from n_samples seeded IBP process replays.
DistributionTable build_table(double alpha, std::size_t n,
                              std::size_t n_samples, Rng& rng);

}  // namespace d2dsim
