#include "bandit/policies.hpp"

#include <cmath>
#include <stdexcept>

namespace bandit {

namespace {

bool is_integral(double x) { return x == std::floor(x); }

void require_range(const char* field, double value, double lo, double hi) {
  if (!(value >= lo && value <= hi)) {
    throw std::invalid_argument(std::string(field) + " must lie in [" +
                                std::to_string(lo) + "," + std::to_string(hi) +
                                "], got " + std::to_string(value));
  }
}

void reject_if_set(const char* field, bool set, PolicyKind kind) {
  if (set) {
    throw std::invalid_argument(std::string(field) + " is not a parameter of " +
                                to_string(kind));
  }
}

}  // namespace

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::UniformRandom: return "ur";
    case PolicyKind::ThompsonSampling: return "ts";
    case PolicyKind::Greedy: return "greedy";
    case PolicyKind::EpsilonGreedy: return "eps-greedy";
    case PolicyKind::EpsilonTS: return "eps-ts";
    case PolicyKind::DecliningEpsilonGreedy: return "declining-eps-greedy";
    case PolicyKind::DecliningEpsilonTS: return "declining-eps-ts";
    case PolicyKind::TopTwoTS: return "top2-ts";
    case PolicyKind::TSPostDiff: return "ts-postdiff";
    case PolicyKind::TSProbClip: return "ts-probclip";
  }
  return "unknown";
}

std::optional<PolicyKind> policy_kind_from_string(const std::string& name) {
  for (auto kind : {PolicyKind::UniformRandom, PolicyKind::ThompsonSampling,
                    PolicyKind::Greedy, PolicyKind::EpsilonGreedy,
                    PolicyKind::EpsilonTS, PolicyKind::DecliningEpsilonGreedy,
                    PolicyKind::DecliningEpsilonTS, PolicyKind::TopTwoTS,
                    PolicyKind::TSPostDiff, PolicyKind::TSProbClip}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

double EpsilonSchedule::operator()(long t) const {
  if (t < 1) throw std::invalid_argument("schedule step must be >= 1");
  double eps = scale * std::pow(static_cast<double>(t), -power);
  return std::min(1.0, eps);
}

void PolicyConfig::validate() const {
  const bool needs_c = kind == PolicyKind::TSPostDiff;
  const bool needs_beta = kind == PolicyKind::TopTwoTS;
  const bool needs_eps =
      kind == PolicyKind::EpsilonGreedy || kind == PolicyKind::EpsilonTS;
  const bool needs_schedule = kind == PolicyKind::DecliningEpsilonGreedy ||
                              kind == PolicyKind::DecliningEpsilonTS;
  const bool needs_pmax = kind == PolicyKind::TSProbClip;

  if (!needs_c) reject_if_set("c", c.has_value(), kind);
  if (!needs_beta) reject_if_set("beta", beta_top2.has_value(), kind);
  if (!needs_eps) reject_if_set("epsilon", epsilon.has_value(), kind);
  if (!needs_schedule) {
    reject_if_set("epsilon_schedule", epsilon_schedule.has_value(), kind);
  }
  if (!needs_pmax) reject_if_set("p_max", p_max.has_value(), kind);

  if (needs_c) {
    if (!c) throw std::invalid_argument("c is required for ts-postdiff");
    require_range("c", *c, 0.0, 1.0);
  }
  if (needs_beta) {
    if (!beta_top2) throw std::invalid_argument("beta is required for top2-ts");
    require_range("beta", *beta_top2, 0.0, 1.0);
  }
  if (needs_eps) {
    if (!epsilon) {
      throw std::invalid_argument("epsilon is required for " + to_string(kind));
    }
    require_range("epsilon", *epsilon, 0.0, 1.0);
  }
  if (needs_pmax) {
    if (!p_max) throw std::invalid_argument("p_max is required for ts-probclip");
    require_range("p_max", *p_max, 0.5, 1.0);
  }
  if (mc_samples_phi < 1) {
    throw std::invalid_argument("mc_samples_phi must be positive");
  }
}

ArmChoice select_uniform(const PolicyState&, RngStream& rng) {
  return {rng.next_double() < 0.5 ? 1 : 2, Branch::UR};
}

ArmChoice select_ts(const PolicyState& state, RngStream& rng) {
  double p1 = sample_beta(state.posteriors[0].alpha, state.posteriors[0].beta,
                          rng);
  double p2 = sample_beta(state.posteriors[1].alpha, state.posteriors[1].beta,
                          rng);
  return {p1 > p2 ? 1 : 2, Branch::TS};
}

ArmChoice select_greedy(const PolicyState& state, RngStream& rng) {
  double m1 = state.posteriors[0].mean();
  double m2 = state.posteriors[1].mean();
  if (m1 == m2) return {rng.next_double() < 0.5 ? 1 : 2, Branch::Exploit};
  return {m1 > m2 ? 1 : 2, Branch::Exploit};
}

ArmChoice select_epsilon_mix(PolicyKind base, double epsilon_t,
                             const PolicyState& state, RngStream& rng) {
  if (!(epsilon_t >= 0.0 && epsilon_t <= 1.0)) {
    throw std::invalid_argument("epsilon_t must lie in [0,1]");
  }
  if (base != PolicyKind::ThompsonSampling && base != PolicyKind::Greedy) {
    throw std::invalid_argument("epsilon mixture base must be ts or greedy");
  }
  if (epsilon_t > 0.0 && rng.next_double() < epsilon_t) {
    return select_uniform(state, rng);
  }
  return base == PolicyKind::ThompsonSampling ? select_ts(state, rng)
                                              : select_greedy(state, rng);
}

ArmChoice select_top2_ts(const PolicyState& state, double beta_top2,
                         RngStream& rng) {
  if (!(beta_top2 >= 0.0 && beta_top2 <= 1.0)) {
    throw std::invalid_argument("beta_top2 must lie in [0,1]");
  }
  ArmChoice best = select_ts(state, rng);
  if (rng.next_double() < beta_top2) return best;
  return {best.arm == 1 ? 2 : 1, Branch::SecondBest};
}

ArmChoice select_ts_postdiff(const PolicyState& state, double c,
                             RngStream& rng) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw std::invalid_argument("c must lie in [0,1]");
  }
  double p1 = sample_beta(state.posteriors[0].alpha, state.posteriors[0].beta,
                          rng);
  double p2 = sample_beta(state.posteriors[1].alpha, state.posteriors[1].beta,
                          rng);
  if (std::abs(p1 - p2) < c) {
    return select_uniform(state, rng);
  }
  // Fresh pair for selection; the first pair only gates the branch.
  return select_ts(state, rng);
}

ExceedanceProbability prob_first_arm_beats_second(const ArmPosterior& post1,
                                                  const ArmPosterior& post2,
                                                  RngStream* rng,
                                                  int mc_samples) {
  const double a1 = post1.alpha, b1 = post1.beta;
  const double a2 = post2.alpha, b2 = post2.beta;
  if (a1 <= 0 || b1 <= 0 || a2 <= 0 || b2 <= 0) {
    throw std::invalid_argument("posterior parameters must be positive");
  }
  if (is_integral(a1) && is_integral(b1) && is_integral(a2) &&
      is_integral(b2)) {
    // P(theta1 > theta2) = sum_{i=0}^{a1-1} B(a2+i, b1+b2) /
    //                      ((b1+i) B(1+i, b1) B(a2, b2)),
    // evaluated with a multiplicative term recurrence.
    auto lbeta = [](double x, double y) {
      return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
    };
    double term = std::exp(lbeta(a2, b1 + b2) - lbeta(a2, b2));
    double sum = 0.0;
    const long n_terms = static_cast<long>(a1);
    for (long i = 0; i < n_terms; ++i) {
      sum += term;
      double di = static_cast<double>(i);
      term *= (a2 + di) * (b1 + di) /
              ((a2 + b1 + b2 + di) * (1.0 + di));
    }
    return {std::min(1.0, std::max(0.0, sum)), true};
  }
  if (rng == nullptr) {
    throw std::invalid_argument(
        "non-integer posterior parameters require an rng for the "
        "Monte-Carlo fallback");
  }
  long hits = 0;
  for (int i = 0; i < mc_samples; ++i) {
    double p1 = sample_beta(a1, b1, *rng);
    double p2 = sample_beta(a2, b2, *rng);
    if (p1 > p2) ++hits;
  }
  return {static_cast<double>(hits) / mc_samples, false};
}

ArmChoice select_ts_probclip(const PolicyState& state, double p_max,
                             RngStream& rng) {
  if (!(p_max >= 0.5 && p_max <= 1.0)) {
    throw std::invalid_argument("p_max must lie in [0.5,1]");
  }
  double pi1 =
      prob_first_arm_beats_second(state.posteriors[0], state.posteriors[1])
          .value;
  double clipped = std::min(p_max, std::max(1.0 - p_max, pi1));
  Branch branch = clipped == pi1 ? Branch::TS : Branch::Clipped;
  return {rng.next_double() < clipped ? 1 : 2, branch};
}

double estimate_phi(const PolicyState& state, double c, int m,
                    RngStream& rng) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(c >= 0.0 && c <= 1.0)) {
    throw std::invalid_argument("c must lie in [0,1]");
  }
  long hits = 0;
  for (int i = 0; i < m; ++i) {
    double p1 = sample_beta(state.posteriors[0].alpha,
                            state.posteriors[0].beta, rng);
    double p2 = sample_beta(state.posteriors[1].alpha,
                            state.posteriors[1].beta, rng);
    if (std::abs(p1 - p2) < c) ++hits;
  }
  return static_cast<double>(hits) / m;
}

ArmChoice select_arm(const PolicyConfig& config, const PolicyState& state,
                     RngStream& rng) {
  switch (config.kind) {
    case PolicyKind::UniformRandom:
      return select_uniform(state, rng);
    case PolicyKind::ThompsonSampling:
      return select_ts(state, rng);
    case PolicyKind::Greedy:
      return select_greedy(state, rng);
    case PolicyKind::EpsilonGreedy:
      return select_epsilon_mix(PolicyKind::Greedy, *config.epsilon, state,
                                rng);
    case PolicyKind::EpsilonTS:
      return select_epsilon_mix(PolicyKind::ThompsonSampling, *config.epsilon,
                                state, rng);
    case PolicyKind::DecliningEpsilonGreedy:
      return select_epsilon_mix(PolicyKind::Greedy,
                                (*config.epsilon_schedule)(state.t), state,
                                rng);
    case PolicyKind::DecliningEpsilonTS:
      return select_epsilon_mix(PolicyKind::ThompsonSampling,
                                (*config.epsilon_schedule)(state.t), state,
                                rng);
    case PolicyKind::TopTwoTS:
      return select_top2_ts(state, *config.beta_top2, rng);
    case PolicyKind::TSPostDiff:
      return select_ts_postdiff(state, *config.c, rng);
    case PolicyKind::TSProbClip:
      return select_ts_probclip(state, *config.p_max, rng);
  }
  throw std::logic_error("unreachable policy kind");
}

}  // namespace bandit
