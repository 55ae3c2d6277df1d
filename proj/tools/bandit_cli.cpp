#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bandit/harness.hpp"
#include "bandit/report.hpp"

namespace {

using namespace bandit;

constexpr std::uint64_t kDefaultSeed = 20210913;

struct CommonOpts {
  std::string out;
  std::string format = "md";
  long sims = 10000;
  std::uint64_t seed = kDefaultSeed;
  double alpha = 0.05;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--sims", opts.sims, "Simulations per configuration");
  cmd->add_option("--seed", opts.seed, "Base RNG seed");
  cmd->add_option("--alpha", opts.alpha, "Significance level");
  cmd->add_option("--out", opts.out, "Write output to a file instead of stdout");
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"csv", "md", "json"}));
  cmd->add_option("--workers", opts.workers,
                  "Worker threads (0 = hardware concurrency)");
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << text;
}

std::string render(const std::vector<ReportRow>& rows,
                   const std::string& format) {
  return emit_table(rows, *table_format_from_string(format));
}

PolicyConfig build_policy(const std::string& name, const std::optional<double>& c,
                          const std::optional<double>& beta,
                          const std::optional<double>& epsilon,
                          const std::optional<double>& p_max) {
  auto kind = policy_kind_from_string(name);
  if (!kind) throw std::invalid_argument("unknown policy: " + name);
  PolicyConfig p;
  p.kind = *kind;
  p.c = c;
  p.beta_top2 = beta;
  p.epsilon = epsilon;
  p.p_max = p_max;
  if (p.kind == PolicyKind::DecliningEpsilonGreedy ||
      p.kind == PolicyKind::DecliningEpsilonTS) {
    p.epsilon_schedule = EpsilonSchedule{};
  }
  p.validate();
  return p;
}

ExperimentConfig make_config(const PolicyConfig& policy, double w, long n,
                             const CommonOpts& opts) {
  ExperimentConfig cfg;
  cfg.policy = policy;
  cfg.effect_size = w;
  cfg.n = n;
  cfg.n_sims = opts.sims;
  cfg.base_seed = opts.seed;
  cfg.alpha_level = opts.alpha;
  cfg.workers = opts.workers;
  cfg.validate();
  return cfg;
}

std::vector<ReportRow> run_grid(const std::vector<ExperimentConfig>& grid) {
  std::vector<ReportRow> rows;
  for (const auto& [cfg, summary] : sweep(grid)) {
    rows.push_back(make_report_row(cfg, summary));
  }
  return rows;
}

// Built-in grids mirroring the published result tables.
std::vector<ExperimentConfig> reproduce_grid(const std::string& table,
                                             const CommonOpts& opts) {
  auto postdiff = [](double c) {
    PolicyConfig p;
    p.kind = PolicyKind::TSPostDiff;
    p.c = c;
    return p;
  };
  auto eps_ts = [](double e) {
    PolicyConfig p;
    p.kind = PolicyKind::EpsilonTS;
    p.epsilon = e;
    return p;
  };
  auto eps_greedy = [](double e) {
    PolicyConfig p;
    p.kind = PolicyKind::EpsilonGreedy;
    p.epsilon = e;
    return p;
  };
  auto top2 = [](double b) {
    PolicyConfig p;
    p.kind = PolicyKind::TopTwoTS;
    p.beta_top2 = b;
    return p;
  };
  auto probclip = [](double pm) {
    PolicyConfig p;
    p.kind = PolicyKind::TSProbClip;
    p.p_max = pm;
    return p;
  };
  auto plain = [](PolicyKind k) {
    PolicyConfig p;
    p.kind = k;
    if (k == PolicyKind::DecliningEpsilonGreedy ||
        k == PolicyKind::DecliningEpsilonTS) {
      p.epsilon_schedule = EpsilonSchedule{};
    }
    return p;
  };

  // (effect size, n) blocks used throughout the tables.
  const std::vector<std::pair<double, long>> blocks = {
      {0.0, 785}, {0.0, 197}, {0.1, 785}, {0.2, 197}};

  std::vector<ExperimentConfig> grid;
  auto add = [&](const PolicyConfig& p, double w, long n) {
    grid.push_back(make_config(p, w, n, opts));
  };
  auto add_blocks = [&](const PolicyConfig& p) {
    for (auto [w, n] : blocks) add(p, w, n);
  };

  if (table == "fixed-dec") {
    add_blocks(plain(PolicyKind::UniformRandom));
    add_blocks(plain(PolicyKind::ThompsonSampling));
    add_blocks(eps_ts(0.1));
    add_blocks(eps_ts(0.6));
    add_blocks(plain(PolicyKind::DecliningEpsilonTS));
    add_blocks(plain(PolicyKind::DecliningEpsilonGreedy));
    add_blocks(eps_greedy(0.1));
    add_blocks(eps_greedy(0.6));
    add_blocks(plain(PolicyKind::Greedy));
    add_blocks(postdiff(0.1));
    add_blocks(postdiff(0.2));
  } else if (table == "choosing-c") {
    for (double c : {0.0, 0.025, 0.05, 0.075, 0.1, 0.125, 0.15, 0.2, 1.0}) {
      add(postdiff(c), 0.0, 785);
      add(postdiff(c), 0.1, 785);
    }
  } else if (table == "more-c-eps") {
    for (double c : {0.05, 0.075, 0.1, 0.125, 0.2}) {
      for (auto [w, n] : blocks) add(postdiff(c), w, n);
    }
    for (double e : {0.025, 0.05, 0.1, 0.2, 0.6}) {
      for (auto [w, n] : blocks) add(eps_ts(e), w, n);
    }
  } else if (table == "probclip") {
    add_blocks(postdiff(0.125));
    add_blocks(probclip(0.9));
    add_blocks(postdiff(0.2));
    add_blocks(probclip(0.6));
  } else if (table == "top2") {
    // Parameter settings pinned per sample size in the study design.
    for (double b : {0.8375, 0.8875, 0.9375, 0.975}) {
      add(top2(b), 0.0, 785);
      add(top2(b), 0.1, 785);
    }
    for (double b : {0.7625, 0.85, 0.9125, 0.95}) {
      add(top2(b), 0.0, 197);
      add(top2(b), 0.2, 197);
    }
    add(top2(0.7), 0.0, 785);
    add(top2(0.7), 0.1, 785);
  } else {
    throw std::invalid_argument("unknown table id: " + table);
  }
  return grid;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Two-armed Bernoulli bandit experiment simulator"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run one experiment configuration");
  std::string policy_name;
  std::optional<double> opt_c, opt_beta, opt_eps, opt_pmax;
  double effect_size = 0.0;
  long n = 785;
  bool trace = false;
  CommonOpts run_opts;
  run_cmd->add_option("--policy", policy_name, "Allocation policy")->required();
  run_cmd->add_option("--c", opt_c, "PostDiff threshold");
  run_cmd->add_option("--beta", opt_beta, "Top-two exploitation probability");
  run_cmd->add_option("--epsilon", opt_eps, "Uniform mixture probability");
  run_cmd->add_option("--p-max", opt_pmax, "Probability clipping ceiling");
  run_cmd->add_option("--effect-size", effect_size, "True difference in arm means");
  run_cmd->add_option("--n", n, "Participants per simulation");
  run_cmd->add_flag("--trace", trace, "Also dump a per-step trace of sim 0");
  add_common(run_cmd, run_opts);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a JSON grid of configurations");
  std::string grid_path;
  CommonOpts sweep_opts;
  sweep_cmd->add_option("grid", grid_path, "JSON file with a list of configs")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(sweep_cmd, sweep_opts);

  // phi-curve
  auto* phi_cmd = app.add_subcommand(
      "phi-curve", "Mean phi-hat over time for a PostDiff run");
  double phi_c = 0.1, phi_w = 0.0;
  long phi_n = 785;
  long phi_points = 20;
  int phi_m = 100;
  CommonOpts phi_opts;
  phi_cmd->add_option("--c", phi_c, "PostDiff threshold")->required();
  phi_cmd->add_option("--effect-size", phi_w, "True difference in arm means");
  phi_cmd->add_option("--n", phi_n, "Participants per simulation");
  phi_cmd->add_option("--points", phi_points, "Number of checkpoints");
  phi_cmd->add_option("--phi-samples", phi_m, "Posterior pairs per estimate");
  add_common(phi_cmd, phi_opts);

  // power-table
  auto* power_cmd = app.add_subcommand(
      "power-table", "Required sample sizes for a list of effect sizes");
  std::vector<double> effect_sizes;
  double power_target = 0.8;
  CommonOpts power_opts;
  power_cmd->add_option("--effect-sizes", effect_sizes, "Comma-separated list")
      ->required()
      ->delimiter(',');
  power_cmd->add_option("--power", power_target, "Target power");
  add_common(power_cmd, power_opts);

  // reproduce
  auto* repro_cmd =
      app.add_subcommand("reproduce", "Run a built-in published-table grid");
  std::string table_id;
  CommonOpts repro_opts;
  repro_cmd
      ->add_option("table", table_id,
                   "One of: fixed-dec, choosing-c, more-c-eps, probclip, top2")
      ->required();
  add_common(repro_cmd, repro_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run_cmd->parsed()) {
    auto policy = build_policy(policy_name, opt_c, opt_beta, opt_eps, opt_pmax);
    auto cfg = make_config(policy, effect_size, n, run_opts);
    auto output = run_experiment(cfg);
    std::vector<ReportRow> rows{make_report_row(cfg, output.summary)};
    write_output(render(rows, run_opts.format), run_opts.out);
    if (trace) {
      std::vector<StepTrace> steps;
      run_simulation(cfg, 0, &steps);
      std::cerr << "t,arm,branch,reward\n";
      for (const auto& s : steps) {
        std::cerr << s.t << "," << s.arm << "," << static_cast<int>(s.branch)
                  << "," << s.reward << "\n";
      }
    }
  } else if (sweep_cmd->parsed()) {
    std::ifstream f(grid_path);
    nlohmann::json j;
    f >> j;
    std::vector<ExperimentConfig> grid;
    for (const auto& item : j) {
      auto cfg = ExperimentConfig::from_json(item);
      if (sweep_cmd->count("--sims")) cfg.n_sims = sweep_opts.sims;
      if (sweep_cmd->count("--seed")) cfg.base_seed = sweep_opts.seed;
      if (sweep_cmd->count("--workers")) cfg.workers = sweep_opts.workers;
      grid.push_back(cfg);
    }
    write_output(render(run_grid(grid), sweep_opts.format), sweep_opts.out);
  } else if (phi_cmd->parsed()) {
    PolicyConfig policy;
    policy.kind = PolicyKind::TSPostDiff;
    policy.c = phi_c;
    auto cfg = make_config(policy, phi_w, phi_n, phi_opts);
    cfg.record_phi = true;
    cfg.phi_mc_samples = phi_m;
    for (long i = 1; i <= phi_points; ++i) {
      cfg.phi_checkpoints.push_back(std::max<long>(1, i * phi_n / phi_points));
    }
    cfg.validate();
    std::ostringstream out;
    out << "t,mean_phi_hat\n";
    for (auto [t, phi] : phi_curve(cfg)) out << t << "," << phi << "\n";
    write_output(out.str(), phi_opts.out);
  } else if (power_cmd->parsed()) {
    std::ostringstream out;
    out << "effect_size,n_total\n";
    for (double w : effect_sizes) {
      out << w << "," << required_sample_size(w, power_opts.alpha, power_target)
          << "\n";
    }
    write_output(out.str(), power_opts.out);
  } else if (repro_cmd->parsed()) {
    auto grid = reproduce_grid(table_id, repro_opts);
    write_output(render(run_grid(grid), repro_opts.format), repro_opts.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
