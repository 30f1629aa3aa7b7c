#include "bif/strategies.hpp"

#include <stdexcept>

namespace bif {

void BifStrategy::initialize(const Environment& env, int init_size, std::mt19937_64& draw_rng,
                             std::mt19937_64& noise_rng) {
  hier_.initialize(env, init_size, draw_rng, noise_rng, &init_warnings_, fresh_mask_);
}

QueryRecord BifStrategy::step(const Environment& env, std::mt19937_64& noise_rng) {
  return hier_.bif_query_step(env, noise_rng);
}

void BifStrategy::install_child(int slot, ChildUnit unit) {
  auto& slots = hier_.children();
  if (slot < 0 || slot >= static_cast<int>(slots.size()))
    throw std::invalid_argument("install_child: slot out of range");
  if (unit.axis != slot)
    throw std::invalid_argument("install_child: unit was trained on a different axis");
  if (!(unit.model.grid() == slots[slot].model.grid()))
    throw std::invalid_argument("install_child: axis grids differ");
  slots[slot] = std::move(unit);
  fresh_mask_[slot] = false;
}

void LaferriereStrategy::initialize(const Environment& env, int init_size,
                                    std::mt19937_64& draw_rng, std::mt19937_64& noise_rng) {
  hier_.initialize(env, init_size, draw_rng, noise_rng, &init_warnings_);
  // Children are frozen from here on, so the prior they induce is fixed.
  cached_prior_ = hier_.parent().prior_mean();
}

QueryRecord LaferriereStrategy::step(const Environment& env, std::mt19937_64& noise_rng) {
  GpModel& parent = hier_.parent();
  QueryRecord rec;
  rec.state = select_query(ucb_map(parent, hier_.acq().kappa));

  const QueryResult obs = env.query(rec.state, noise_rng, false);
  rec.response = obs.parent;
  if (obs.clamped) rec.warnings.push_back("clamp");

  parent.add_observation(rec.state, obs.parent);
  parent.increment_counter(rec.state);
  if (parent.fit(opt_)) rec.warnings.push_back("fit_parent");
  return rec;
}

void VanillaStrategy::initialize(const Environment& env, int init_size,
                                 std::mt19937_64& draw_rng, std::mt19937_64& noise_rng) {
  if (!(env.grid() == model_.grid()))
    throw std::invalid_argument("VanillaStrategy: environment grid mismatch");
  // Same initializer as the hierarchical strategies; the per-child
  // sub-responses are drawn and discarded.
  const InitSample sample = draw_initialization(env, init_size, draw_rng, noise_rng);
  for (std::size_t i = 0; i < sample.states.size(); ++i) {
    if (sample.results[i].clamped) init_warnings_.push_back("clamp");
    model_.add_observation(sample.states[i], sample.results[i].parent);
    model_.increment_counter(sample.states[i]);
  }
  if (model_.fit(opt_)) init_warnings_.push_back("init_fit_parent");
}

QueryRecord VanillaStrategy::step(const Environment& env, std::mt19937_64& noise_rng) {
  QueryRecord rec;
  rec.state = select_query(ucb_map(model_, acq_.kappa));

  const QueryResult obs = env.query(rec.state, noise_rng, false);
  rec.response = obs.parent;
  if (obs.clamped) rec.warnings.push_back("clamp");

  model_.add_observation(rec.state, obs.parent);
  if (model_.fit(opt_)) rec.warnings.push_back("fit_parent");
  model_.increment_counter(rec.state);
  return rec;
}

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kBif:
      return "bif";
    case StrategyKind::kLaferriere:
      return "laferriere";
    case StrategyKind::kVanilla:
      return "vanilla";
  }
  throw std::logic_error("to_string: unhandled strategy");
}

StrategyKind parse_strategy(const std::string& name) {
  if (name == "bif") return StrategyKind::kBif;
  if (name == "laferriere") return StrategyKind::kLaferriere;
  if (name == "vanilla") return StrategyKind::kVanilla;
  throw std::invalid_argument("unknown strategy: " + name);
}

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, const Grid& joint,
                                        AcquisitionConfig acq, OptimizerConfig opt) {
  switch (kind) {
    case StrategyKind::kBif:
      return std::make_unique<BifStrategy>(joint, acq, opt);
    case StrategyKind::kLaferriere:
      return std::make_unique<LaferriereStrategy>(joint, acq, opt);
    case StrategyKind::kVanilla:
      return std::make_unique<VanillaStrategy>(joint, acq, opt);
  }
  throw std::logic_error("make_strategy: unhandled strategy");
}

}  // namespace bif
