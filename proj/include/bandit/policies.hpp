#pragma once

#include <array>
#include <optional>
#include <string>

#include "bandit/core.hpp"
#include "bandit/rng.hpp"

namespace bandit {

enum class PolicyKind {
  UniformRandom,
  ThompsonSampling,
  Greedy,
  EpsilonGreedy,
  EpsilonTS,
  DecliningEpsilonGreedy,
  DecliningEpsilonTS,
  TopTwoTS,
  TSPostDiff,
  TSProbClip,
};

std::string to_string(PolicyKind kind);
std::optional<PolicyKind> policy_kind_from_string(const std::string& name);

// Exploration schedule for the declining-epsilon variants. The default is
// eps(t) = min(1, scale * t^(-power)) with scale=1, power=1/2.
struct EpsilonSchedule {
  std::string name = "inverse-sqrt";
  double scale = 1.0;
  double power = 0.5;

  double operator()(long t) const;
};

struct PolicyConfig {
  PolicyKind kind = PolicyKind::UniformRandom;
  std::optional<double> c;            // TSPostDiff threshold
  std::optional<double> beta_top2;    // TopTwoTS exploitation probability
  std::optional<double> epsilon;      // fixed epsilon mixtures
  std::optional<EpsilonSchedule> epsilon_schedule;  // declining mixtures
  std::optional<double> p_max;        // TSProbClip ceiling
  int mc_samples_phi = 100000;        // diagnostics only

  // Rejects parameters irrelevant to `kind`, missing required ones, and
  // out-of-range values. Throws std::invalid_argument naming the field.
  void validate() const;
};

enum class Branch { UR, TS, Exploit, SecondBest, Clipped };

struct ArmChoice {
  int arm;  // 1 or 2
  Branch branch;
};

struct PolicyState {
  std::array<ArmPosterior, 2> posteriors;
  long t = 1;
  std::array<long, 2> pulls{0, 0};
  std::array<long, 2> successes{0, 0};
};

ArmChoice select_uniform(const PolicyState& state, RngStream& rng);

ArmChoice select_ts(const PolicyState& state, RngStream& rng);

// Argmax of posterior mean, exact ties broken uniformly at random.
ArmChoice select_greedy(const PolicyState& state, RngStream& rng);

// With probability epsilon_t delegates to select_uniform, otherwise to the
// base policy (ThompsonSampling or Greedy).
ArmChoice select_epsilon_mix(PolicyKind base, double epsilon_t,
                             const PolicyState& state, RngStream& rng);

// Samples both posteriors once; plays the argmax with probability
// beta_top2 and the other arm otherwise.
ArmChoice select_top2_ts(const PolicyState& state, double beta_top2,
                         RngStream& rng);

// First pair of posterior draws decides |p1-p2| < c; below the threshold
// falls back to uniform, otherwise a fresh pair is drawn and its argmax
// played. Consumes exactly 2 or 4 beta draws.
ArmChoice select_ts_postdiff(const PolicyState& state, double c,
                             RngStream& rng);

struct ExceedanceProbability {
  double value;
  bool exact;  // false when the Monte-Carlo fallback was used
};

// P(theta1 > theta2) for independent Beta posteriors. Exact via the
// closed-form finite sum when both posteriors have integer parameters;
// otherwise a Monte-Carlo estimate with mc_samples draws (requires rng).
ExceedanceProbability prob_first_arm_beats_second(const ArmPosterior& post1,
                                                  const ArmPosterior& post2,
                                                  RngStream* rng = nullptr,
                                                  int mc_samples = 100000);

// Clips the exact arm-1 selection probability to [1-p_max, p_max].
ArmChoice select_ts_probclip(const PolicyState& state, double p_max,
                             RngStream& rng);

// Monte-Carlo estimate of phi_t: the posterior probability that the arm
// means differ by less than c. Diagnostic only.
double estimate_phi(const PolicyState& state, double c, int m,
                    RngStream& rng);

// Dispatch on config.kind. Config must already be validated.
ArmChoice select_arm(const PolicyConfig& config, const PolicyState& state,
                     RngStream& rng);

}  // namespace bandit
