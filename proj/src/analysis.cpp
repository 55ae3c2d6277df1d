#include "bandit/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bandit/harness.hpp"

namespace bandit {

TestResult wald_test(long n1, long s1, long n2, long s2, double alpha_level) {
  if (n1 < 0 || n2 < 0 || s1 < 0 || s2 < 0 || s1 > n1 || s2 > n2) {
    throw std::invalid_argument("successes must satisfy 0 <= s_k <= n_k");
  }
  if (!(alpha_level > 0.0 && alpha_level < 1.0)) {
    throw std::invalid_argument("alpha_level must lie in (0,1)");
  }

  TestResult out;
  if (n1 == 0 || n2 == 0) {
    out.degenerate = true;
    if (n1 > 0 || n2 > 0) {
      // Only one arm observed; call it the empirically superior one.
      out.estimated_superior_arm = n1 > 0 ? 1 : 2;
    }
    return out;
  }

  const double p1 = static_cast<double>(s1) / n1;
  const double p2 = static_cast<double>(s2) / n2;
  out.estimated_superior_arm = p1 > p2 ? 1 : (p2 > p1 ? 2 : 0);

  const double var = p1 * (1.0 - p1) / n1 + p2 * (1.0 - p2) / n2;
  const double z_crit = normal_quantile(1.0 - alpha_level / 2.0);
  if (var == 0.0) {
    out.degenerate = true;
    if (p1 == p2) {
      out.z = 0.0;
      out.reject = false;
    } else {
      out.z = p1 > p2 ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
      out.reject = true;
    }
    return out;
  }
  out.z = (p1 - p2) / std::sqrt(var);
  out.reject = std::abs(out.z) > z_crit;
  return out;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile requires p in (0,1)");
  }
  // Acklam's rational approximation, then one Halley refinement.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double e = normal_cdf(x) - p;
  double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

long required_sample_size(double effect_size, double alpha_level,
                          double power_target) {
  if (effect_size <= 0.0) {
    throw std::domain_error("effect size must be positive");
  }
  if (!(alpha_level > 0.0 && alpha_level < 1.0) ||
      !(power_target > 0.0 && power_target < 1.0)) {
    throw std::domain_error("alpha_level and power_target must lie in (0,1)");
  }
  double z_sum =
      normal_quantile(1.0 - alpha_level / 2.0) + normal_quantile(power_target);
  return static_cast<long>(
      std::ceil(z_sum * z_sum / (effect_size * effect_size)));
}

namespace {

Estimate proportion_estimate(double sum, long n) {
  double p = sum / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

}  // namespace

MetricsSummary aggregate_metrics(std::span<const SimulationResult> results,
                                 const Environment& env,
                                 double /*alpha_level*/) {
  if (results.empty()) {
    throw std::domain_error("aggregate_metrics: empty result list");
  }
  const long n = results.front().pulls[0] + results.front().pulls[1];
  const bool has_effect = env.effect_size > 0.0;
  const int true_superior = env.p_star[0] >= env.p_star[1] ? 1 : 2;

  double reject_sum = 0.0, type_s_sum = 0.0, prop_opt_sum = 0.0,
         prop_sup_sum = 0.0;
  double reward_sum = 0.0, reward_sq_sum = 0.0;

  for (const auto& r : results) {
    if (r.pulls[0] + r.pulls[1] != n) {
      throw std::invalid_argument(
          "aggregate_metrics: mixed sample sizes in batch");
    }
    if (r.test.reject) {
      reject_sum += 1.0;
      if (has_effect && r.test.estimated_superior_arm != true_superior) {
        type_s_sum += 1.0;
      }
    }
    double per_capita = static_cast<double>(r.total_reward) / n;
    reward_sum += per_capita;
    reward_sq_sum += per_capita * per_capita;

    if (has_effect) {
      prop_opt_sum += static_cast<double>(r.pulls[true_superior - 1]) / n;
    }

    // Empirically superior arm by final sample mean; an unpulled arm is
    // never superior, an exact tie splits the credit.
    double m1 = r.pulls[0] > 0
                    ? static_cast<double>(r.successes[0]) / r.pulls[0]
                    : -1.0;
    double m2 = r.pulls[1] > 0
                    ? static_cast<double>(r.successes[1]) / r.pulls[1]
                    : -1.0;
    if (m1 == m2) {
      prop_sup_sum += 0.5;
    } else {
      int sup = m1 > m2 ? 1 : 2;
      prop_sup_sum += static_cast<double>(r.pulls[sup - 1]) / n;
    }
  }

  const long n_sims = static_cast<long>(results.size());
  MetricsSummary out;
  out.n_sims = n_sims;
  out.is_power = has_effect;
  out.rejection_rate = proportion_estimate(reject_sum, n_sims);
  out.type_s = has_effect ? proportion_estimate(type_s_sum, n_sims)
                          : Estimate{0.0, 0.0};
  double mean_reward = reward_sum / n_sims;
  double var = n_sims > 1 ? (reward_sq_sum - n_sims * mean_reward * mean_reward)
                                / (n_sims - 1)
                          : 0.0;
  out.reward = {mean_reward, std::sqrt(std::max(0.0, var) / n_sims)};
  if (has_effect) {
    out.prop_opt = proportion_estimate(prop_opt_sum, n_sims);
  }
  out.prop_sup = proportion_estimate(prop_sup_sum, n_sims);
  return out;
}

}  // namespace bandit
