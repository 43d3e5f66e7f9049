#include "d2dsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace d2dsim {

namespace {

std::uint64_t splitmix64_step(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag_a,
                       std::uint64_t tag_b) {
  std::uint64_t state = base;
  std::uint64_t out = splitmix64_step(state);
  state ^= tag_a;
  out ^= splitmix64_step(state);
  state ^= tag_b;
  out ^= splitmix64_step(state);
  return out;
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::domain_error("uniform_index: n must be positive");
  // Rejection to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

long long Rng::poisson(double lambda) {
  if (!(lambda >= 0) || !std::isfinite(lambda))
    throw std::domain_error("poisson: lambda must be finite and >= 0");
  if (lambda == 0) return 0;

  if (lambda < 30.0) {
    // Inversion by sequential search over the cdf.
    const double u = uniform01();
    double p = std::exp(-lambda);
    double cdf = p;
    long long k = 0;
    const long long cap =
        static_cast<long long>(lambda + 60.0 * std::sqrt(lambda) + 120.0);
    while (u > cdf && k < cap) {
      ++k;
      p *= lambda / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }

  // PTRS transformed rejection (Hormann 1993).
  const double b = 0.931 + 2.53 * std::sqrt(lambda);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_lambda = std::log(lambda);
  for (;;) {
    double u = uniform01() - 0.5;
    double v = uniform01();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs =
        kf * log_lambda - lambda - std::lgamma(kf + 1.0);
    if (lhs <= rhs) return static_cast<long long>(kf);
  }
}

double Rng::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  has_spare_normal_ = true;
  return u * f;
}

double Rng::gamma(double shape, double scale) {
  if (!(shape > 0) || !(scale > 0))
    throw std::domain_error("gamma: shape and scale must be > 0");
  if (shape < 1.0) {
    double u = uniform01();
    if (u <= 0.0) u = 0x1.0p-53;
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v * scale;
  }
}

}  // namespace d2dsim
