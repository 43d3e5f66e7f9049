#pragma once

#include <cstdint>
#include <random>

namespace d2dsim {

// Derives an independent stream seed from a base seed and up to two tags.
// Pure splitmix64 mixing; stable across platforms and runs.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag_a,
                       std::uint64_t tag_b = 0);

// Deterministic random source. All sampling is implemented on top of the
// mt19937_64 output sequence (which the standard pins down bit-exactly),
// so identical seeds give identical draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  bool bernoulli(double p) { return uniform01() < p; }

  // Poisson draw: inversion by sequential search for small means,
  // transformed rejection (PTRS) for lambda >= 30.
  long long poisson(double lambda);

  // Standard normal via the Marsaglia polar method (second draw cached).
  double normal();

  // Gamma(shape, scale) via Marsaglia-Tsang, with the usual power boost
  // for shape < 1.
  double gamma(double shape, double scale);

 private:
  std::mt19937_64 gen_;
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

}  // namespace d2dsim
