#pragma once

#include <cstdint>

namespace bandit {

// Deterministic splittable PRNG (SplitMix64 with a per-stream gamma).
// Same (base_seed, stream_index) gives the same draw sequence on every
// platform; distinct stream indices give statistically independent streams.
class RngStream {
 public:
  RngStream(std::uint64_t base_seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit mantissa.
  double next_double();

  std::uint64_t base_seed() const { return base_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

 private:
  std::uint64_t state_;
  std::uint64_t gamma_;  // odd increment, stream-specific
  std::uint64_t base_seed_;
  std::uint64_t stream_index_;
};

// Standard normal via Marsaglia's polar method.
double sample_normal(RngStream& rng);

// Gamma(shape, 1) via Marsaglia-Tsang; valid for any shape > 0.
double sample_gamma(double shape, RngStream& rng);

// Beta(alpha, beta) as a ratio of gamma variates. Throws
// std::invalid_argument on non-positive parameters.
double sample_beta(double alpha, double beta, RngStream& rng);

}  // namespace bandit
