#pragma once

#include <optional>
#include <span>

#include "bandit/core.hpp"

namespace bandit {

struct SimulationResult;  // defined in harness.hpp

struct TestResult {
  double z = 0.0;  // may be +-inf in degenerate zero-variance cases
  bool reject = false;
  int estimated_superior_arm = 0;  // 1, 2, or 0 for an exact tie
  bool degenerate = false;
};

// Two-proportion Wald Z-test with unpooled variances.
// Degenerate handling: zero SE with differing means rejects with infinite z;
// zero SE with equal means gives z=0 and no rejection; an unpulled arm never
// rejects.
TestResult wald_test(long n1, long s1, long n2, long s2,
                     double alpha_level = 0.05);

// Standard normal CDF, absolute error below 1e-7.
double normal_cdf(double x);

// Inverse standard normal CDF on (0,1); throws std::domain_error at the
// endpoints.
double normal_quantile(double p);

// Total sample size for a two-arm trial at the given effect size, using the
// normal approximation with worst-case per-arm variance 0.25:
//   ceil((z_{1-alpha/2} + z_{power})^2 / w^2).
long required_sample_size(double effect_size, double alpha_level = 0.05,
                          double power_target = 0.8);

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

struct MetricsSummary {
  Estimate rejection_rate;  // FPR when effect size is 0, Power otherwise
  bool is_power = false;
  Estimate type_s;
  Estimate reward;  // mean reward per participant
  std::optional<Estimate> prop_opt;  // only defined when an effect exists
  Estimate prop_sup;
  long n_sims = 0;
};

// Aggregates a batch of completed simulations sharing one environment and
// sample size. Throws on an empty batch or mixed sample sizes.
MetricsSummary aggregate_metrics(std::span<const SimulationResult> results,
                                 const Environment& env,
                                 double alpha_level = 0.05);

}  // namespace bandit
