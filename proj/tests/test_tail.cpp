#include <stdexcept>
#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "d2dsim/tail.hpp"

using namespace d2dsim;

TEST_CASE("chernoff bounds: closed-form spot checks") {
  // mu = 15, delta = 0.2 evaluated from the log-space forms.
  CHECK(chernoff_lower(15.0, 0.2) ==
        doctest::Approx(std::exp(15.0 * (-0.2 - 0.8 * std::log(0.8))))
            .epsilon(1e-12));
  CHECK(chernoff_upper(15.0, 0.2) ==
        doctest::Approx(std::exp(15.0 * (0.2 - 1.2 * std::log(1.2))))
            .epsilon(1e-12));
  CHECK(std::fabs(chernoff_lower(15.0, 0.2) - 0.7245) < 1e-3);
  CHECK(std::fabs(chernoff_upper(15.0, 0.2) - 0.7544) < 1e-3);
}

TEST_CASE("chernoff bounds: limits, monotonicity, domain") {
  CHECK(chernoff_lower(15.0, 1e-12) == doctest::Approx(1.0));
  CHECK(chernoff_upper(15.0, 1e-12) == doctest::Approx(1.0));
  CHECK(chernoff_lower(15.0, 0.99) < chernoff_lower(15.0, 0.2));
  CHECK(chernoff_upper(30.0, 0.5) < chernoff_upper(15.0, 0.5));
  CHECK_THROWS_AS(chernoff_lower(15.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(chernoff_lower(15.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(chernoff_upper(15.0, 0.0), std::domain_error);
}

TEST_CASE("chernoff bounds stay finite in log space up to mu = 1e4") {
  for (double mu : {10.0, 100.0, 1000.0, 10000.0}) {
    for (double delta : {0.1, 0.5, 0.9, 0.99}) {
      const double log_lower = log_chernoff_lower(mu, delta);
      const double log_upper = log_chernoff_upper(mu, delta);
      CHECK(std::isfinite(log_lower));
      CHECK(std::isfinite(log_upper));
      CHECK(log_lower <= 0.0);
      CHECK(log_upper <= 0.0);
      // The plain values may underflow to 0 but never overflow or NaN.
      CHECK(std::isfinite(chernoff_lower(mu, delta)));
      CHECK(std::isfinite(chernoff_upper(mu, delta)));
    }
  }
  // mu = 1e4, delta = 0.99: far below 1e-300, representable only as a log.
  CHECK(log_chernoff_lower(1e4, 0.99) < std::log(1e-300));
}

TEST_CASE("saddlepoint spot value at the exact-arithmetic point") {
  // mu1 = 20, mu2 = 5, k = 15: sqrt(625) = 25, C = 20, D = 5, so the pmf
  // collapses to 1/sqrt(50 pi).
  const TailParams params{20.0, 5.0};
  const double expected = 1.0 / std::sqrt(50.0 * std::numbers::pi);
  CHECK(std::fabs(saddlepoint_pmf(params, 15) - expected) < 1e-9);
}

TEST_CASE("saddlepoint C, D identities on random triples") {
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    const TailParams params{rng.uniform(0.5, 40.0), rng.uniform(0.1, 10.0)};
    const long long k = static_cast<long long>(rng.uniform(-50.0, 100.0));
    const auto [c, d] = saddlepoint_terms(params, k);
    CHECK(std::fabs((c - d) - static_cast<double>(k)) <= 1e-12);
    CHECK(std::fabs(c * d - params.mu1 * params.mu2) <= 1e-12);
  }
}

TEST_CASE("saddlepoint cdf conventions") {
  const TailParams params{20.0, 5.0};
  CHECK(saddlepoint_cdf(params, -1) == 0.0);
  CHECK(saddlepoint_cdf(params, 0) ==
        doctest::Approx(saddlepoint_pmf(params, 0)));
  double prev = 0.0;
  for (long long m = 0; m <= 60; ++m) {
    const double f = saddlepoint_cdf(params, m);
    CHECK(f >= prev - 1e-15);
    CHECK(f <= 1.0);
    prev = f;
  }
}

TEST_CASE("exact skellam pmf: symmetry, normalization, mean") {
  const TailParams sym{7.0, 7.0};
  for (long long k : {1LL, 3LL, 10LL})
    CHECK(exact_skellam_pmf(sym, k) ==
          doctest::Approx(exact_skellam_pmf(sym, -k)).epsilon(1e-12));

  const TailParams params{20.0, 5.0};
  double total = 0.0, mean = 0.0;
  for (long long k = -200; k <= 200; ++k) {
    const double p = exact_skellam_pmf(params, k);
    total += p;
    mean += static_cast<double>(k) * p;
  }
  CHECK(std::fabs(total - 1.0) <= 1e-9);
  CHECK(mean == doctest::Approx(15.0).epsilon(1e-9));
}

TEST_CASE("saddlepoint cdf tracks the exact oracle within 0.02") {
  const TailParams params{20.0, 5.0};
  double worst = 0.0;
  for (long long k = 0; k <= 40; ++k) {
    const double dev =
        std::fabs(saddlepoint_cdf(params, k) - exact_skellam_cdf(params, k));
    worst = std::max(worst, dev);
  }
  CHECK(worst <= 0.02);
}

TEST_CASE("empirical cdf steps") {
  const EmpiricalCdf cdf = empirical_cdf({15, 15, 15});
  CHECK(cdf.at(14) == 0.0);
  CHECK(cdf.at(15) == 1.0);
  CHECK(cdf.at(100) == 1.0);

  const EmpiricalCdf mixed = empirical_cdf({1, 3, 3, 7});
  CHECK(mixed.at(0) == 0.0);
  CHECK(mixed.at(1) == doctest::Approx(0.25));
  CHECK(mixed.at(3) == doctest::Approx(0.75));
  CHECK(mixed.at(7) == 1.0);  // F at the maximum sample is 1

  CHECK_THROWS_AS(empirical_cdf({}), std::domain_error);
}

TEST_CASE("ibp empirical mean matches the expected old count") {
  Rng rng(333);
  std::vector<long long> samples;
  const int n_samples = 20000;
  samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i)
    samples.push_back(replay_ibp_user(20.0, 4, rng).old_count);
  double mean = 0.0;
  for (long long s : samples) mean += static_cast<double>(s);
  mean /= n_samples;
  CHECK(std::fabs(mean - 15.0) < 0.2);
}

TEST_CASE("model sampler reproduces skellam moments") {
  Rng rng(404);
  const int n = 50000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(sample_model_old_count(20.0, 4, rng));
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(mean == doctest::Approx(15.0).epsilon(0.01));
  // Skellam variance mu1 + mu2 = 25, distinctly above the IBP's 15.
  CHECK(var == doctest::Approx(25.0).epsilon(0.05));
}

TEST_CASE("saddlepoint mass within 2% over the parameter grid") {
  for (double mu1 : {5.0, 10.0, 20.0, 35.0, 50.0}) {
    for (std::size_t n : {2, 4, 6, 10}) {
      const TailParams params{mu1, mu1 / static_cast<double>(n)};
      const double sigma = std::sqrt(params.mu1 + params.mu2);
      const long long lo =
          static_cast<long long>(std::floor(params.mu() - 10.0 * sigma));
      const long long hi =
          static_cast<long long>(std::ceil(params.mu() + 10.0 * sigma));
      double mass = 0.0;
      for (long long k = lo; k <= hi; ++k) mass += saddlepoint_pmf(params, k);
      CHECK_MESSAGE(std::fabs(mass - 1.0) <= 0.02, "mu1=", mu1, " n=", n,
                    " mass=", mass);
    }
  }
}

TEST_CASE("chernoff dominance: upper tail holds, lower tail fails past 0.5") {
  // The multiplicative bounds are exact-Poisson safe but the Skellam
  // difference violates the lower-tail bound at large delta; the scan
  // reports rather than hides this.
  const TailParams params{20.0, 5.0};
  const auto violations = chernoff_dominance_scan(params);
  CHECK_FALSE(violations.empty());
  for (const auto& v : violations) {
    CHECK(v.lower_tail);          // the upper tail never violates here
    CHECK(v.delta >= 0.5);        // confined to the deep lower tail
    CHECK(v.excess() < 0.02);     // worst measured excess ~0.013
    CHECK(v.excess() > 0.0);
  }
}

TEST_CASE("ibp old counts are tighter than the skellam model") {
  // The true IBP m_n^h is a sum of Bernoullis plus a Poisson, with variance
  // ~ mu; the Skellam analysis model has variance mu1 + mu2. The saddlepoint
  // cdf therefore sits measurably away from the IBP empirical cdf (the
  // model discrepancy the toolkit is meant to expose).
  Rng rng(2024);
  std::vector<long long> samples;
  const int n = 50000;
  samples.reserve(n);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const long long x = replay_ibp_user(20.0, 4, rng).old_count;
    samples.push_back(x);
    sum += static_cast<double>(x);
    sum_sq += static_cast<double>(x) * static_cast<double>(x);
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(mean == doctest::Approx(15.0).epsilon(0.01));
  CHECK(var == doctest::Approx(15.0).epsilon(0.05));  // not 25

  const TailParams params{20.0, 5.0};
  const auto emp = empirical_cdf(samples);
  double worst = 0.0;
  for (long long k = 0; k <= 40; ++k)
    worst = std::max(worst,
                     std::fabs(saddlepoint_cdf(params, k) - emp.at(k)));
  CHECK(worst > 0.05);   // the discrepancy is real ...
  CHECK(worst < 0.08);   // ... and of the expected size (~0.064)
}

TEST_CASE("build_table columns and bound mapping") {
  Rng rng(55);
  const auto table = build_table(20.0, 4, 5000, rng);

  REQUIRE(table.support.front() == 0);
  CHECK(table.support.back() >= 40);

  const std::size_t width = table.support.size();
  REQUIRE(table.saddlepoint_cdf.size() == width);
  for (std::size_t i = 1; i < width; ++i) {
    CHECK(table.saddlepoint_cdf[i] >= table.saddlepoint_cdf[i - 1] - 1e-15);
    CHECK(table.exact_cdf[i] >= table.exact_cdf[i - 1] - 1e-15);
    CHECK(table.empirical_cdf[i] >= table.empirical_cdf[i - 1] - 1e-15);
  }

  // At x = mu = 15 both bounds degenerate to 1.
  const std::size_t at_mu = 15;
  CHECK(table.support[at_mu] == 15);
  CHECK(table.bound_on_cdf[at_mu] == doctest::Approx(1.0));
  // Below mu the lower-curve bound is an upper bound on the cdf; above mu
  // the mapped value is a lower bound on the cdf.
  for (std::size_t i = 0; i < width; ++i) {
    const long long k = table.support[i];
    if (k < 15) {
      CHECK(std::isfinite(table.chernoff_lower_curve[i]));
      CHECK(table.bound_on_cdf[i] == table.chernoff_lower_curve[i]);
    } else if (k > 15) {
      CHECK(std::isfinite(table.chernoff_upper_curve[i]));
      CHECK(table.bound_on_cdf[i] ==
            doctest::Approx(1.0 - table.chernoff_upper_curve[i]));
    }
  }

  // The IBP empirical cdf respects both Chernoff curves (slack 3/sqrt(N)).
  const double slack = 3.0 / std::sqrt(5000.0);
  for (std::size_t i = 0; i < width; ++i) {
    const long long k = table.support[i];
    if (k < 15)
      CHECK(table.empirical_cdf[i] <= table.chernoff_lower_curve[i] + slack);
    if (k > 15)
      CHECK(1.0 - table.empirical_cdf[i] <=
            table.chernoff_upper_curve[i] + slack);
  }

  // From-zero summation: the deficit is small but strictly accounted.
  CHECK(table.excluded_negative_mass > 0.0);
  CHECK(table.excluded_negative_mass < 0.01);
  CHECK(std::fabs(table.saddlepoint_normalization_deficit) < 0.02);
}

TEST_CASE("build_table with a single sample is a one-step empirical cdf") {
  Rng rng(66);
  const auto table = build_table(20.0, 4, 1, rng);
  for (std::size_t i = 1; i < table.support.size(); ++i)
    CHECK(table.empirical_cdf[i] >= table.empirical_cdf[i - 1]);
  // Exactly one jump from 0 to 1.
  CHECK(table.empirical_cdf.front() == 0.0);
  CHECK(table.empirical_cdf.back() == 1.0);
  int jumps = 0;
  for (std::size_t i = 1; i < table.support.size(); ++i)
    if (table.empirical_cdf[i] != table.empirical_cdf[i - 1]) ++jumps;
  CHECK(jumps == 1);
}
