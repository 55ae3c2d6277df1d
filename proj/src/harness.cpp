#include "bandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace bandit {

void ExperimentConfig::validate() const {
  policy.validate();
  if (effect_size < 0.0 || effect_size > 1.0) {
    throw std::invalid_argument("effect_size must lie in [0,1]");
  }
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (n_sims < 1) throw std::invalid_argument("n_sims must be >= 1");
  if (!(alpha_level > 0.0 && alpha_level < 1.0)) {
    throw std::invalid_argument("alpha_level must lie in (0,1)");
  }
  if (phi_mc_samples < 1) {
    throw std::invalid_argument("phi_mc_samples must be >= 1");
  }
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
  for (long t : phi_checkpoints) {
    if (t < 1 || t > n) {
      throw std::invalid_argument("phi checkpoints must lie in [1,n]");
    }
  }
  if (record_phi && phi_checkpoints.empty()) {
    throw std::invalid_argument("record_phi requires phi_checkpoints");
  }
}

namespace {

nlohmann::json policy_to_json(const PolicyConfig& p) {
  nlohmann::json j;
  j["kind"] = to_string(p.kind);
  if (p.c) j["c"] = *p.c;
  if (p.beta_top2) j["beta"] = *p.beta_top2;
  if (p.epsilon) j["epsilon"] = *p.epsilon;
  if (p.p_max) j["p_max"] = *p.p_max;
  if (p.epsilon_schedule) {
    j["epsilon_schedule"] = {{"name", p.epsilon_schedule->name},
                             {"scale", p.epsilon_schedule->scale},
                             {"power", p.epsilon_schedule->power}};
  }
  if (p.mc_samples_phi != PolicyConfig{}.mc_samples_phi) {
    j["mc_samples_phi"] = p.mc_samples_phi;
  }
  return j;
}

PolicyConfig policy_from_json(const nlohmann::json& j) {
  PolicyConfig p;
  auto kind = policy_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) {
    throw std::invalid_argument("unknown policy kind: " +
                                j.at("kind").get<std::string>());
  }
  p.kind = *kind;
  if (j.contains("c")) p.c = j["c"].get<double>();
  if (j.contains("beta")) p.beta_top2 = j["beta"].get<double>();
  if (j.contains("epsilon")) p.epsilon = j["epsilon"].get<double>();
  if (j.contains("p_max")) p.p_max = j["p_max"].get<double>();
  if (j.contains("epsilon_schedule")) {
    EpsilonSchedule s;
    const auto& js = j["epsilon_schedule"];
    if (js.contains("name")) s.name = js["name"].get<std::string>();
    if (js.contains("scale")) s.scale = js["scale"].get<double>();
    if (js.contains("power")) s.power = js["power"].get<double>();
    p.epsilon_schedule = s;
  } else if (p.kind == PolicyKind::DecliningEpsilonGreedy ||
             p.kind == PolicyKind::DecliningEpsilonTS) {
    p.epsilon_schedule = EpsilonSchedule{};
  }
  if (j.contains("mc_samples_phi")) {
    p.mc_samples_phi = j["mc_samples_phi"].get<int>();
  }
  return p;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.policy = policy_from_json(j.at("policy"));
  if (j.contains("effect_size")) c.effect_size = j["effect_size"].get<double>();
  if (j.contains("n")) c.n = j["n"].get<long>();
  if (j.contains("n_sims")) c.n_sims = j["n_sims"].get<long>();
  if (j.contains("base_seed")) c.base_seed = j["base_seed"].get<std::uint64_t>();
  if (j.contains("alpha_level")) c.alpha_level = j["alpha_level"].get<double>();
  if (j.contains("record_phi")) c.record_phi = j["record_phi"].get<bool>();
  if (j.contains("phi_checkpoints")) {
    c.phi_checkpoints = j["phi_checkpoints"].get<std::vector<long>>();
  }
  if (j.contains("phi_mc_samples")) {
    c.phi_mc_samples = j["phi_mc_samples"].get<int>();
  }
  if (j.contains("workers")) c.workers = j["workers"].get<int>();
  c.validate();
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["policy"] = policy_to_json(policy);
  j["effect_size"] = effect_size;
  j["n"] = n;
  j["n_sims"] = n_sims;
  j["base_seed"] = base_seed;
  j["alpha_level"] = alpha_level;
  if (record_phi) {
    j["record_phi"] = true;
    j["phi_checkpoints"] = phi_checkpoints;
    j["phi_mc_samples"] = phi_mc_samples;
  }
  if (workers != 0) j["workers"] = workers;
  return j;
}

SimulationResult run_simulation(const ExperimentConfig& config,
                                long sim_index,
                                std::vector<StepTrace>* trace) {
  if (sim_index < 0 || sim_index >= config.n_sims) {
    throw std::invalid_argument("sim_index out of range");
  }
  const Environment env = Environment::from_effect_size(config.effect_size);
  RngStream rng(config.base_seed, static_cast<std::uint64_t>(sim_index));
  RngStream phi_rng(config.base_seed,
                    static_cast<std::uint64_t>(config.n_sims + sim_index));

  PolicyState state;
  SimulationResult out;
  std::size_t next_checkpoint = 0;
  std::vector<long> checkpoints = config.phi_checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());

  for (long t = 1; t <= config.n; ++t) {
    state.t = t;
    // Policy draws first, then the reward draw, in a fixed order.
    ArmChoice choice = select_arm(config.policy, state, rng);
    int reward = draw_reward(env, choice.arm, rng);

    int k = choice.arm - 1;
    state.posteriors[k] = posterior_update(state.posteriors[k], reward);
    state.pulls[k] += 1;
    state.successes[k] += reward;
    if (choice.branch == Branch::UR) out.ur_branch_count += 1;
    if (trace) trace->push_back({t, choice.arm, choice.branch, reward});

    if (config.record_phi) {
      while (next_checkpoint < checkpoints.size() &&
             checkpoints[next_checkpoint] == t) {
        double c = config.policy.c.value_or(0.0);
        out.phi_hat_at_checkpoints.push_back(
            estimate_phi(state, c, config.phi_mc_samples, phi_rng));
        ++next_checkpoint;
      }
    }
  }

  out.pulls = state.pulls;
  out.successes = state.successes;
  out.total_reward = state.successes[0] + state.successes[1];
  out.test = wald_test(state.pulls[0], state.successes[0], state.pulls[1],
                       state.successes[1], config.alpha_level);
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  config.validate();
  int workers = config.workers;
  if (workers == 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = static_cast<int>(
      std::min<long>(workers, config.n_sims));

  std::vector<SimulationResult> results(
      static_cast<std::size_t>(config.n_sims));
  std::exception_ptr first_error;
  std::atomic<long> error_index{-1};

  auto work = [&](int worker_id) {
    for (long i = worker_id; i < config.n_sims; i += workers) {
      try {
        results[static_cast<std::size_t>(i)] = run_simulation(config, i);
      } catch (...) {
        long expected = -1;
        if (error_index.compare_exchange_strong(expected, i)) {
          first_error = std::current_exception();
        }
        return;
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  if (error_index.load() >= 0) {
    try {
      std::rethrow_exception(first_error);
    } catch (const std::exception& e) {
      throw std::runtime_error("simulation " +
                               std::to_string(error_index.load()) +
                               " failed: " + e.what());
    }
  }

  const Environment env = Environment::from_effect_size(config.effect_size);
  ExperimentOutput out;
  out.summary = aggregate_metrics(results, env, config.alpha_level);
  out.results = std::move(results);
  return out;
}

std::string policy_param_string(const PolicyConfig& policy) {
  std::ostringstream oss;
  bool first = true;
  auto add = [&](const char* name, double v) {
    if (!first) oss << ",";
    oss << name << "=" << v;
    first = false;
  };
  if (policy.c) add("c", *policy.c);
  if (policy.beta_top2) add("beta", *policy.beta_top2);
  if (policy.epsilon) add("epsilon", *policy.epsilon);
  if (policy.p_max) add("p_max", *policy.p_max);
  if (policy.epsilon_schedule) {
    if (!first) oss << ",";
    oss << "schedule=" << policy.epsilon_schedule->name << "("
        << policy.epsilon_schedule->scale << ","
        << policy.epsilon_schedule->power << ")";
    first = false;
  }
  return oss.str();
}

std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& grid) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  std::set<std::string> keys;
  for (const auto& cfg : grid) {
    cfg.validate();
    std::ostringstream key;
    key << to_string(cfg.policy.kind) << "|" << policy_param_string(cfg.policy)
        << "|" << cfg.effect_size << "|" << cfg.n;
    if (!keys.insert(key.str()).second) {
      throw std::invalid_argument("sweep: duplicate grid key " + key.str());
    }
  }
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const auto& cfg : grid) {
    rows.emplace_back(cfg, run_experiment(cfg).summary);
  }
  return rows;
}

std::vector<std::pair<long, double>> phi_curve(const ExperimentConfig& config) {
  config.validate();
  if (!config.record_phi) {
    throw std::invalid_argument("phi_curve requires record_phi");
  }
  if (config.policy.kind != PolicyKind::TSPostDiff) {
    throw std::invalid_argument("phi_curve requires a ts-postdiff policy");
  }
  auto output = run_experiment(config);
  std::vector<long> checkpoints = config.phi_checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());

  std::vector<std::pair<long, double>> curve;
  curve.reserve(checkpoints.size());
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    double sum = 0.0;
    for (const auto& r : output.results) {
      sum += r.phi_hat_at_checkpoints.at(i);
    }
    curve.emplace_back(checkpoints[i],
                       sum / static_cast<double>(output.results.size()));
  }
  return curve;
}

}  // namespace bandit
