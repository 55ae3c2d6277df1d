#include "bandit/core.hpp"

#include <stdexcept>

namespace bandit {

Environment Environment::from_effect_size(double w) {
  if (w < 0.0 || w > 1.0) {
    throw std::invalid_argument("effect size must lie in [0,1]");
  }
  Environment env;
  env.p_star = {0.5 + w / 2.0, 0.5 - w / 2.0};
  env.effect_size = w;
  return env;
}

Environment Environment::from_means(double p1, double p2) {
  if (p1 < 0.0 || p1 > 1.0 || p2 < 0.0 || p2 > 1.0) {
    throw std::invalid_argument("arm means must lie in [0,1]");
  }
  Environment env;
  env.p_star = {p1, p2};
  env.effect_size = p1 - p2;
  return env;
}

int draw_reward(const Environment& env, int arm, RngStream& rng) {
  if (arm != 1 && arm != 2) {
    throw std::invalid_argument("arm index must be 1 or 2");
  }
  return rng.next_double() < env.p_star[arm - 1] ? 1 : 0;
}

ArmPosterior posterior_update(ArmPosterior post, int reward) {
  if (reward == 1) {
    post.alpha += 1.0;
  } else {
    post.beta += 1.0;
  }
  return post;
}

}  // namespace bandit
