#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bif/environment.hpp"
#include "bif/metrics.hpp"
#include "bif/strategies.hpp"

namespace bif {

struct EnvSpec {
  std::string name = "synth2d";  // synth2d | synth3d | nonlinear | modularity | dataset
  std::string variant = "multiplicative";  // nonlinear only
  double alpha = 1.0;                      // nonlinear only
  int task = 3;                            // modularity only
  std::string data_path;                   // dataset only
};

std::unique_ptr<Environment> make_environment(const EnvSpec& spec, double noise_beta);

struct TransferPlan {
  enum class Slot { kFresh, kGood, kBad };
  std::vector<Slot> slots;
  int pretrain_budget = 50;

  bool all_fresh() const;
  std::string label() const;  // e.g. "good-good"
};

// Parses "good,fresh" style plan strings.
TransferPlan parse_transfer_plan(const std::string& text, int pretrain_budget);

struct RunConfig {
  StrategyKind strategy = StrategyKind::kBif;
  EnvSpec env;
  double kappa = 7.5;
  double gamma = 3.0;
  int init_size = 6;
  int train_steps = 10;
  int budget = 100;
  double noise_beta = 0.1;
  int repeats = 30;
  std::uint64_t base_seed = 0;
  int jobs = 1;
  std::string out_path;  // empty: results are returned but not written
};

// Rejects invalid configurations before any run starts.
void validate_config(const RunConfig& cfg);

// One seeded run: seed = base_seed + repeat, initialization, `budget` query
// steps, per-query metrics. A transfer plan (modularity) pre-trains donor
// hierarchies on tasks 1 and 2 and installs their children.
Trajectory execute_single_run(const RunConfig& cfg, const std::string& setting, int repeat,
                              const TransferPlan* plan = nullptr);

// The CLI entry points. Each writes the results CSV and a JSON config
// snapshot when cfg.out_path is set, and returns all trajectories in output
// order (setting, repeat).
std::vector<Trajectory> run_experiment(const RunConfig& cfg);
std::vector<Trajectory> run_modularity(const RunConfig& cfg, const TransferPlan& plan);

struct AblationAxis {
  std::string name;  // "noise" | "nonlinearity"
  std::vector<double> values;
};
std::vector<Trajectory> run_ablation(const RunConfig& cfg, const AblationAxis& axis);

// One-at-a-time sweep over kappa | gamma | init_size | train_steps.
std::vector<Trajectory> run_sweep(const RunConfig& cfg, const std::string& param,
                                  const std::vector<double>& values);

// Serialization. The CSV column layout is fixed across strategies; metrics a
// strategy does not produce are left empty.
std::string results_csv_string(const std::vector<Trajectory>& trajectories);
void write_results_csv(const std::vector<Trajectory>& trajectories, const std::string& path);

// Resolved config + version, plus any per-command extras, as pretty JSON.
std::string config_json_string(const RunConfig& cfg, const std::string& command,
                               const std::vector<std::pair<std::string, std::string>>& extras);
// Derives the snapshot path from the CSV path (extension swapped to .json).
std::string snapshot_path_for(const std::string& csv_path);

}  // namespace bif
