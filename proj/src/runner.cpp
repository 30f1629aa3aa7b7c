#include "bif/runner.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bif/dataset_io.hpp"
#include "bif/rng.hpp"
#include "bif/version.hpp"

namespace bif {

namespace {

std::string fmt_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string fmt_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string sanitize_flag(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == ';' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

struct Unit {
  RunConfig cfg;
  std::string setting;
  int repeat = 0;
  const TransferPlan* plan = nullptr;
};

std::vector<Trajectory> execute_units(const std::vector<Unit>& units, int jobs) {
  std::vector<Trajectory> out(units.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= units.size()) break;
      const Unit& u = units[i];
      try {
        out[i] = execute_single_run(u.cfg, u.setting, u.repeat, u.plan);
      } catch (const std::exception& e) {
        // A failed run is reported in its own output row; siblings continue.
        Trajectory t;
        t.setting = u.setting;
        t.strategy = to_string(u.cfg.strategy);
        t.repeat = u.repeat;
        t.seed = u.cfg.base_seed + static_cast<std::uint64_t>(u.repeat);
        t.run_id = u.setting + "/" + std::to_string(u.repeat);
        t.error = e.what();
        out[i] = std::move(t);
      }
    }
  };
  const int nthreads =
      std::max(1, std::min<int>(jobs, static_cast<int>(units.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

using Extras = std::vector<std::pair<std::string, std::string>>;

std::vector<Trajectory> finish(const RunConfig& cfg, const std::string& command,
                               const Extras& extras, std::vector<Trajectory> trajs) {
  if (!cfg.out_path.empty()) {
    write_results_csv(trajs, cfg.out_path);
    write_text_file(snapshot_path_for(cfg.out_path), config_json_string(cfg, command, extras));
  }
  return trajs;
}

int pretrain_task_for(int slot, TransferPlan::Slot kind) {
  // Task 3 reuses task 1's child on axis 0 and task 2's child on axis 1; a
  // "bad" transfer installs the donor from the mismatched task.
  switch (kind) {
    case TransferPlan::Slot::kFresh:
      return 0;
    case TransferPlan::Slot::kGood:
      return slot == 0 ? 1 : 2;
    case TransferPlan::Slot::kBad:
      return slot == 0 ? 2 : 1;
  }
  throw std::logic_error("unhandled transfer slot");
}

void apply_transfer_plan(BifStrategy& strat, const RunConfig& cfg, const TransferPlan& plan,
                         std::uint64_t seed) {
  const int dims = strat.hierarchy().joint_grid().dims();
  if (static_cast<int>(plan.slots.size()) != dims)
    throw std::invalid_argument("transfer plan length must equal the child count (" +
                                std::to_string(dims) + ")");
  if (plan.all_fresh()) return;
  if (dims != 2)
    throw std::invalid_argument("child transfer is defined for the two-child modular tasks");
  if (plan.pretrain_budget < 0)
    throw std::invalid_argument("pretraining budget must be non-negative");

  AcquisitionConfig acq{cfg.kappa, cfg.gamma};
  OptimizerConfig opt;
  opt.steps = cfg.train_steps;

  std::map<int, BifStrategy> donors;
  for (int d = 0; d < dims; ++d) {
    const int task = pretrain_task_for(d, plan.slots[d]);
    if (task == 0 || donors.count(task)) continue;
    auto env = make_environment(EnvSpec{.name = "modularity", .task = task}, cfg.noise_beta);
    BifStrategy donor(env->grid(), acq, opt);
    const std::string label = "pretrain" + std::to_string(task);
    auto draw_rng = derive_rng(seed, label + "-init");
    auto noise_rng = derive_rng(seed, label + "-noise");
    donor.initialize(*env, cfg.init_size, draw_rng, noise_rng);
    for (int q = 0; q < plan.pretrain_budget; ++q) donor.step(*env, noise_rng);
    donors.emplace(task, std::move(donor));
  }
  for (int d = 0; d < dims; ++d) {
    const int task = pretrain_task_for(d, plan.slots[d]);
    if (task == 0) continue;
    strat.install_child(d, donors.at(task).hierarchy().children()[d]);
  }
}

}  // namespace

std::unique_ptr<Environment> make_environment(const EnvSpec& spec, double noise_beta) {
  if (spec.name == "synth2d") return synth2d(noise_beta);
  if (spec.name == "synth3d") return synth3d(noise_beta);
  if (spec.name == "nonlinear") {
    NonlinearitySpec ns;
    ns.variant = parse_nonlinearity_variant(spec.variant);
    ns.alpha = spec.alpha;
    return nonlinear_env(ns, noise_beta);
  }
  if (spec.name == "modularity") return modularity_env(spec.task, noise_beta);
  if (spec.name == "dataset") {
    if (spec.data_path.empty())
      throw std::invalid_argument("dataset environment requires a data path");
    return load_env_csv(spec.data_path, noise_beta);
  }
  throw std::invalid_argument("unknown environment: " + spec.name);
}

bool TransferPlan::all_fresh() const {
  for (Slot s : slots) {
    if (s != Slot::kFresh) return false;
  }
  return true;
}

std::string TransferPlan::label() const {
  std::string out;
  for (Slot s : slots) {
    if (!out.empty()) out += "-";
    switch (s) {
      case Slot::kFresh:
        out += "fresh";
        break;
      case Slot::kGood:
        out += "good";
        break;
      case Slot::kBad:
        out += "bad";
        break;
    }
  }
  return out;
}

TransferPlan parse_transfer_plan(const std::string& text, int pretrain_budget) {
  TransferPlan plan;
  plan.pretrain_budget = pretrain_budget;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token == "fresh")
      plan.slots.push_back(TransferPlan::Slot::kFresh);
    else if (token == "good")
      plan.slots.push_back(TransferPlan::Slot::kGood);
    else if (token == "bad")
      plan.slots.push_back(TransferPlan::Slot::kBad);
    else
      throw std::invalid_argument("transfer plan entries must be fresh, good, or bad; got '" +
                                  token + "'");
  }
  if (plan.slots.empty()) throw std::invalid_argument("empty transfer plan");
  return plan;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.budget < 1) throw std::invalid_argument("budget must be at least 1");
  if (cfg.repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  if (cfg.init_size < 1) throw std::invalid_argument("init size must be at least 1");
  if (cfg.train_steps < 0) throw std::invalid_argument("train steps must be non-negative");
  if (cfg.kappa < 0.0) throw std::invalid_argument("kappa must be non-negative");
  if (cfg.gamma < 0.0) throw std::invalid_argument("gamma must be non-negative");
  if (cfg.noise_beta < 0.0) throw std::invalid_argument("noise beta must be non-negative");
  if (cfg.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  const auto env = make_environment(cfg.env, cfg.noise_beta);
  if (cfg.init_size > env->grid().size())
    throw std::invalid_argument("init size exceeds the environment grid size");
}

Trajectory execute_single_run(const RunConfig& cfg, const std::string& setting, int repeat,
                              const TransferPlan* plan) {
  const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(repeat);
  const auto env = make_environment(cfg.env, cfg.noise_beta);

  AcquisitionConfig acq{cfg.kappa, cfg.gamma};
  OptimizerConfig opt;
  opt.steps = cfg.train_steps;
  const auto strategy = make_strategy(cfg.strategy, env->grid(), acq, opt);

  if (plan != nullptr && !plan->all_fresh()) {
    auto* bif = dynamic_cast<BifStrategy*>(strategy.get());
    if (bif == nullptr)
      throw std::invalid_argument("child transfer requires the bif strategy");
    apply_transfer_plan(*bif, cfg, *plan, seed);
  } else if (plan != nullptr) {
    // Length check still applies to an all-fresh plan.
    if (static_cast<int>(plan->slots.size()) != env->grid().dims())
      throw std::invalid_argument("transfer plan length must equal the child count (" +
                                  std::to_string(env->grid().dims()) + ")");
  }

  auto draw_rng = derive_rng(seed, "init");
  auto noise_rng = derive_rng(seed, "noise");
  strategy->initialize(*env, cfg.init_size, draw_rng, noise_rng);

  Trajectory traj;
  traj.setting = setting;
  traj.strategy = to_string(cfg.strategy);
  traj.repeat = repeat;
  traj.seed = seed;
  traj.run_id = setting + "/" + std::to_string(repeat);
  traj.init_states = strategy->parent_model().train_states();

  const std::vector<double>& truth = env->parent_map();
  std::vector<std::string> pending = strategy->init_warnings();
  double cumulative = 0.0;
  for (int q = 1; q <= cfg.budget; ++q) {
    QueryRecord rec = strategy->step(*env, noise_rng);

    QueryMetrics m;
    m.query_index = q;
    const GpModel& parent = strategy->parent_model();
    const PosteriorResult post = parent.posterior_full();
    m.ro = relative_optimum_from(ucb_from_posterior(post, parent.counters(), cfg.kappa), truth);
    const std::vector<double> predicted(post.mean.data(), post.mean.data() + post.mean.size());
    m.parent_r2 = r_squared(predicted, truth);
    if (const auto* kids = strategy->child_units()) m.child_r2 = child_r2_mean(*kids, *env);
    cumulative += m.ro + m.parent_r2 + m.child_r2.value_or(0.0);
    m.cumulative_auc = cumulative;

    m.warnings = std::move(pending);  // initialization warnings land on row 1
    pending.clear();
    m.warnings.insert(m.warnings.end(), rec.warnings.begin(), rec.warnings.end());
    traj.queries.push_back(std::move(m));
  }
  return traj;
}

std::vector<Trajectory> run_experiment(const RunConfig& cfg) {
  validate_config(cfg);
  std::vector<Unit> units;
  units.reserve(cfg.repeats);
  for (int rep = 0; rep < cfg.repeats; ++rep) units.push_back({cfg, "default", rep, nullptr});
  return finish(cfg, "run", {}, execute_units(units, cfg.jobs));
}

std::vector<Trajectory> run_modularity(const RunConfig& cfg, const TransferPlan& plan) {
  RunConfig base = cfg;
  base.env.name = "modularity";
  validate_config(base);
  const auto env = make_environment(base.env, base.noise_beta);
  if (static_cast<int>(plan.slots.size()) != env->grid().dims())
    throw std::invalid_argument("transfer plan length must equal the child count (" +
                                std::to_string(env->grid().dims()) + ")");
  if (!plan.all_fresh() && base.strategy != StrategyKind::kBif)
    throw std::invalid_argument("child transfer requires the bif strategy");

  std::vector<Unit> units;
  units.reserve(base.repeats);
  for (int rep = 0; rep < base.repeats; ++rep)
    units.push_back({base, plan.label(), rep, &plan});
  return finish(base, "modularity",
                {{"plan", plan.label()},
                 {"pretrain_budget", std::to_string(plan.pretrain_budget)},
                 {"task", std::to_string(base.env.task)}},
                execute_units(units, base.jobs));
}

std::vector<Trajectory> run_ablation(const RunConfig& cfg, const AblationAxis& axis) {
  if (axis.values.empty()) throw std::invalid_argument("ablation requires at least one value");
  std::vector<Unit> units;
  std::string joined;
  for (double v : axis.values) {
    RunConfig setting_cfg = cfg;
    std::string label;
    if (axis.name == "noise") {
      setting_cfg.noise_beta = v;
      label = "beta=" + fmt_value(v);
    } else if (axis.name == "nonlinearity") {
      setting_cfg.env.name = "nonlinear";
      setting_cfg.env.alpha = v;
      label = "alpha=" + fmt_value(v);
    } else {
      throw std::invalid_argument("unknown ablation axis: " + axis.name);
    }
    validate_config(setting_cfg);
    joined += (joined.empty() ? "" : ",") + fmt_value(v);
    for (int rep = 0; rep < cfg.repeats; ++rep)
      units.push_back({setting_cfg, label, rep, nullptr});
  }
  return finish(cfg, "ablate", {{"axis", axis.name}, {"values", joined}},
                execute_units(units, cfg.jobs));
}

std::vector<Trajectory> run_sweep(const RunConfig& cfg, const std::string& param,
                                  const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("sweep requires at least one value");
  auto as_int = [&](double v) {
    if (v != std::floor(v))
      throw std::invalid_argument("sweep over " + param + " needs integer values");
    return static_cast<int>(v);
  };
  std::vector<Unit> units;
  std::string joined;
  for (double v : values) {
    RunConfig setting_cfg = cfg;
    if (param == "kappa")
      setting_cfg.kappa = v;
    else if (param == "gamma")
      setting_cfg.gamma = v;
    else if (param == "init_size")
      setting_cfg.init_size = as_int(v);
    else if (param == "train_steps")
      setting_cfg.train_steps = as_int(v);
    else
      throw std::invalid_argument("unknown sweep parameter: " + param);
    validate_config(setting_cfg);
    joined += (joined.empty() ? "" : ",") + fmt_value(v);
    const std::string label = param + "=" + fmt_value(v);
    for (int rep = 0; rep < cfg.repeats; ++rep)
      units.push_back({setting_cfg, label, rep, nullptr});
  }
  return finish(cfg, "sweep", {{"param", param}, {"values", joined}},
                execute_units(units, cfg.jobs));
}

std::string results_csv_string(const std::vector<Trajectory>& trajectories) {
  std::string out = "setting,strategy,repeat,seed,query,ro,parent_r2,child_r2,cumulative_auc,warn_flags\n";
  for (const Trajectory& traj : trajectories) {
    const std::string prefix = traj.setting + "," + traj.strategy + "," +
                               std::to_string(traj.repeat) + "," + std::to_string(traj.seed) + ",";
    if (!traj.error.empty()) {
      out += prefix + "0,,,,," + sanitize_flag("error:" + traj.error) + "\n";
      continue;
    }
    for (const QueryMetrics& q : traj.queries) {
      out += prefix + std::to_string(q.query_index) + "," + fmt_metric(q.ro) + "," +
             fmt_metric(q.parent_r2) + ",";
      if (q.child_r2) out += fmt_metric(*q.child_r2);
      out += "," + fmt_metric(q.cumulative_auc) + ",";
      for (std::size_t i = 0; i < q.warnings.size(); ++i) {
        if (i > 0) out += ";";
        out += sanitize_flag(q.warnings[i]);
      }
      out += "\n";
    }
  }
  return out;
}

void write_results_csv(const std::vector<Trajectory>& trajectories, const std::string& path) {
  write_text_file(path, results_csv_string(trajectories));
}

std::string config_json_string(const RunConfig& cfg, const std::string& command,
                               const std::vector<std::pair<std::string, std::string>>& extras) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["command"] = command;
  nlohmann::json c;
  c["strategy"] = to_string(cfg.strategy);
  c["env"] = {{"name", cfg.env.name},
              {"variant", cfg.env.variant},
              {"alpha", cfg.env.alpha},
              {"task", cfg.env.task},
              {"data", cfg.env.data_path}};
  c["kappa"] = cfg.kappa;
  c["gamma"] = cfg.gamma;
  c["init_size"] = cfg.init_size;
  c["train_steps"] = cfg.train_steps;
  c["budget"] = cfg.budget;
  c["noise_beta"] = cfg.noise_beta;
  c["repeats"] = cfg.repeats;
  c["base_seed"] = cfg.base_seed;
  c["jobs"] = cfg.jobs;
  c["out"] = cfg.out_path;
  j["config"] = std::move(c);
  for (const auto& [key, value] : extras) j[key] = value;
  return j.dump(2) + "\n";
}

std::string snapshot_path_for(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() > suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return csv_path.substr(0, csv_path.size() - suffix.size()) + ".json";
  return csv_path + ".json";
}

}  // namespace bif
