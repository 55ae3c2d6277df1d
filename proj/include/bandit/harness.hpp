#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bandit/analysis.hpp"
#include "bandit/core.hpp"
#include "bandit/policies.hpp"

namespace bandit {

struct ExperimentConfig {
  PolicyConfig policy;
  double effect_size = 0.0;
  long n = 785;                 // participants per simulation
  long n_sims = 10000;
  std::uint64_t base_seed = 20210913;
  double alpha_level = 0.05;
  bool record_phi = false;
  std::vector<long> phi_checkpoints;
  int phi_mc_samples = 100;     // posterior pairs per phi-hat estimate
  int workers = 0;              // 0 = hardware concurrency

  void validate() const;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SimulationResult {
  std::array<long, 2> pulls{0, 0};
  std::array<long, 2> successes{0, 0};
  long total_reward = 0;
  TestResult test;
  std::vector<double> phi_hat_at_checkpoints;
  long ur_branch_count = 0;
};

struct StepTrace {
  long t;
  int arm;
  Branch branch;
  int reward;
};

// One seeded trajectory: policy selection, reward draw, posterior update
// for n steps, then the Wald test on the final counts. Fully determined by
// (config.base_seed, sim_index). Phi-hat diagnostics use a disjoint stream
// (base_seed, n_sims + sim_index) so they never perturb the trajectory.
// When `trace` is non-null every step is appended to it (debug only).
SimulationResult run_simulation(const ExperimentConfig& config,
                                long sim_index,
                                std::vector<StepTrace>* trace = nullptr);

struct ExperimentOutput {
  MetricsSummary summary;
  std::vector<SimulationResult> results;
};

// Runs n_sims independent simulations (parallel across workers) and
// aggregates. Output is identical for any worker count.
ExperimentOutput run_experiment(const ExperimentConfig& config);

using SweepRow = std::pair<ExperimentConfig, MetricsSummary>;

// One summary per grid entry; throws on duplicate (policy, params, w, n)
// keys. A one-entry grid matches run_experiment exactly.
std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& grid);

// Key used for sweep-duplicate detection and report rows.
std::string policy_param_string(const PolicyConfig& policy);

// Per checkpoint, the cross-simulation mean of phi-hat. Requires a
// TSPostDiff policy with record_phi and non-empty checkpoints.
std::vector<std::pair<long, double>> phi_curve(const ExperimentConfig& config);

}  // namespace bandit
