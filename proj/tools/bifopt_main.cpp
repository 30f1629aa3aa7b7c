#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "bif/dataset_io.hpp"
#include "bif/runner.hpp"
#include "bif/version.hpp"

namespace {

struct CliOptions {
  std::string strategy = "bif";
  std::string env = "synth2d";
  std::string variant = "multiplicative";
  double alpha = 1.0;
  int task = 3;
  std::string data;
  double kappa = 7.5;
  double gamma = 3.0;
  int init_size = 6;
  int train_steps = 10;
  int budget = 100;
  double noise_beta = 0.1;
  int repeats = 30;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out = "results.csv";

  std::string param;             // sweep
  std::vector<double> values;    // sweep / ablate
  std::string axis = "noise";    // ablate
  std::string plan = "fresh,fresh";  // modularity
  int pretrain_budget = 50;
};

void add_common_options(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--strategy", o.strategy, "bif | laferriere | vanilla")
      ->check(CLI::IsMember({"bif", "laferriere", "vanilla"}));
  cmd->add_option("--env", o.env, "synth2d | synth3d | nonlinear | modularity | dataset")
      ->check(CLI::IsMember({"synth2d", "synth3d", "nonlinear", "modularity", "dataset"}));
  cmd->add_option("--variant", o.variant,
                  "nonlinearity variant: exponential | exponential_inside | multiplicative");
  cmd->add_option("--alpha", o.alpha, "nonlinearity scale");
  cmd->add_option("--task", o.task, "modularity task (1-3)");
  cmd->add_option("--data", o.data, "dataset CSV path");
  cmd->add_option("--kappa", o.kappa, "parent UCB weight");
  cmd->add_option("--gamma", o.gamma, "child prior/contribution weight");
  cmd->add_option("--init-size", o.init_size, "initialization points r");
  cmd->add_option("--train-steps", o.train_steps, "optimizer steps per query t");
  cmd->add_option("--budget", o.budget, "query budget Q");
  cmd->add_option("--noise-beta", o.noise_beta, "observation noise scale");
  cmd->add_option("--repeats", o.repeats, "independent repeats");
  cmd->add_option("--seed", o.seed, "base seed (run i uses seed + i)");
  cmd->add_option("--jobs", o.jobs, "max concurrent runs");
  cmd->add_option("--out", o.out, "results CSV path");
  cmd->set_config("--config", "", "flat key=value config file; flags override");
}

bif::RunConfig to_config(const CliOptions& o) {
  bif::RunConfig cfg;
  cfg.strategy = bif::parse_strategy(o.strategy);
  cfg.env.name = o.env;
  cfg.env.variant = o.variant;
  cfg.env.alpha = o.alpha;
  cfg.env.task = o.task;
  cfg.env.data_path = o.data;
  cfg.kappa = o.kappa;
  cfg.gamma = o.gamma;
  cfg.init_size = o.init_size;
  cfg.train_steps = o.train_steps;
  cfg.budget = o.budget;
  cfg.noise_beta = o.noise_beta;
  cfg.repeats = o.repeats;
  cfg.base_seed = o.seed;
  cfg.jobs = o.jobs;
  cfg.out_path = o.out;
  return cfg;
}

void report(const std::vector<bif::Trajectory>& trajs, const std::string& out) {
  std::size_t rows = 0;
  std::size_t failures = 0;
  for (const auto& t : trajs) {
    rows += t.error.empty() ? t.queries.size() : 1;
    if (!t.error.empty()) ++failures;
  }
  std::printf("wrote %s (%zu rows", out.c_str(), rows);
  if (failures > 0) std::printf(", %zu failed runs", failures);
  std::printf(") and %s\n", bif::snapshot_path_for(out).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("bifopt ") + bif::kVersion +
               " - hierarchical GP Bayesian-optimization benchmarks"};
  app.require_subcommand(1);
  CliOptions o;

  auto* run = app.add_subcommand("run", "one strategy on one environment, repeated");
  add_common_options(run, o);

  auto* sweep = app.add_subcommand("sweep", "one-at-a-time hyperparameter sweep");
  add_common_options(sweep, o);
  sweep->add_option("--param", o.param, "kappa | gamma | init_size | train_steps")->required();
  sweep->add_option("--values", o.values, "comma-separated sweep values")
      ->required()
      ->delimiter(',');

  auto* ablate = app.add_subcommand("ablate", "noise or nonlinearity ablation, paired seeds");
  add_common_options(ablate, o);
  ablate->add_option("--axis", o.axis, "noise | nonlinearity")
      ->check(CLI::IsMember({"noise", "nonlinearity"}));
  ablate->add_option("--values", o.values, "comma-separated axis values")
      ->required()
      ->delimiter(',');

  auto* modularity = app.add_subcommand("modularity", "task-3 runs with child transfer");
  add_common_options(modularity, o);
  modularity->add_option("--plan", o.plan, "per-child: fresh | good | bad (comma-separated)");
  modularity->add_option("--pretrain-budget", o.pretrain_budget,
                         "donor query budget before transfer");

  auto* gen = app.add_subcommand("gen-data", "write an environment as a noiseless dataset CSV");
  add_common_options(gen, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto env = bif::make_environment(
          bif::EnvSpec{o.env, o.variant, o.alpha, o.task, o.data}, 0.0);
      bif::generate_dataset_file(*env, o.out);
      std::printf("wrote %s (%d rows)\n", o.out.c_str(), env->grid().size());
      return 0;
    }

    const bif::RunConfig cfg = to_config(o);
    std::vector<bif::Trajectory> trajs;
    if (run->parsed()) {
      trajs = bif::run_experiment(cfg);
    } else if (sweep->parsed()) {
      trajs = bif::run_sweep(cfg, o.param, o.values);
    } else if (ablate->parsed()) {
      trajs = bif::run_ablation(cfg, bif::AblationAxis{o.axis, o.values});
    } else if (modularity->parsed()) {
      bif::RunConfig mcfg = cfg;
      mcfg.env.name = "modularity";
      trajs = bif::run_modularity(mcfg, bif::parse_transfer_plan(o.plan, o.pretrain_budget));
    }
    report(trajs, cfg.out_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
