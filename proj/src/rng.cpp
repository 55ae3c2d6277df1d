#include "bandit/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace bandit {

namespace {

// Stafford variant 13 of the 64-bit mix finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

}  // namespace

RngStream::RngStream(std::uint64_t base_seed, std::uint64_t stream_index)
    : base_seed_(base_seed), stream_index_(stream_index) {
  state_ = mix64(base_seed + kGoldenGamma * stream_index);
  gamma_ = mix64(state_ + kGoldenGamma) | 1ULL;
}

std::uint64_t RngStream::next_u64() {
  state_ += gamma_;
  return mix64(state_);
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double sample_normal(RngStream& rng) {
  for (;;) {
    double u = 2.0 * rng.next_double() - 1.0;
    double v = 2.0 * rng.next_double() - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

double sample_gamma(double shape, RngStream& rng) {
  if (shape <= 0.0) {
    throw std::invalid_argument("sample_gamma: shape must be positive");
  }
  if (shape < 1.0) {
    // Boost to shape+1, then scale back by U^(1/shape).
    double g = sample_gamma(shape + 1.0, rng);
    double u = rng.next_double();
    while (u == 0.0) u = rng.next_double();
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = sample_normal(rng);
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = rng.next_double();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

double sample_beta(double alpha, double beta, RngStream& rng) {
  if (alpha <= 0.0 || beta <= 0.0) {
    throw std::invalid_argument("sample_beta: parameters must be positive");
  }
  double a = sample_gamma(alpha, rng);
  double b = sample_gamma(beta, rng);
  double x = a / (a + b);
  // Keep draws strictly inside (0,1) for downstream ratios.
  if (x <= 0.0) x = 1e-300;
  if (x >= 1.0) x = 1.0 - 1e-16;
  return x;
}

}  // namespace bandit
