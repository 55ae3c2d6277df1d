#pragma once

#include <array>

#include "bandit/rng.hpp"

namespace bandit {

// Two-armed Bernoulli environment. When built from an effect size w the
// arm means are 0.5 + w/2 and 0.5 - w/2, so arm 1 is the superior arm.
struct Environment {
  std::array<double, 2> p_star{0.5, 0.5};
  double effect_size = 0.0;

  static Environment from_effect_size(double w);
  static Environment from_means(double p1, double p2);
};

// Beta belief over one arm's success rate. Prior is Beta(1,1), so
// alpha + beta - 2 counts the observed pulls of the arm.
struct ArmPosterior {
  double alpha = 1.0;
  double beta = 1.0;

  double mean() const { return alpha / (alpha + beta); }
};

// Bernoulli(p_star[arm]) draw; consumes exactly one uniform variate.
// Arms are 1-based. Throws std::invalid_argument on a bad arm index.
int draw_reward(const Environment& env, int arm, RngStream& rng);

// Conjugate update: success increments alpha, failure increments beta.
ArmPosterior posterior_update(ArmPosterior post, int reward);

}  // namespace bandit
