#include "bif/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bif/rng.hpp"

namespace bif {

namespace {

constexpr double kMaxGuard = 1e-12;  // child-map maxima below this give c_s = 0

void note_fit(bool aborted, const std::string& tag, std::vector<std::string>* warnings) {
  if (aborted && warnings) warnings->push_back(tag);
}

}  // namespace

void ChildUnit::rebuild() {
  std::vector<int> states;
  std::vector<double> targets;
  states.reserve(true_states.size() + inferred_states.size());
  targets.reserve(states.capacity());
  if (!true_raw.empty()) {
    transform_true = fit_rescale(true_raw);
    for (std::size_t i = 0; i < true_raw.size(); ++i) {
      states.push_back(true_states[i]);
      targets.push_back(transform_true.apply(true_raw[i]));
    }
  }
  if (!inferred_raw.empty()) {
    transform_inferred = fit_rescale(inferred_raw);
    for (std::size_t i = 0; i < inferred_raw.size(); ++i) {
      states.push_back(inferred_states[i]);
      targets.push_back(transform_inferred.apply(inferred_raw[i]));
    }
  }
  model.set_data(std::move(states), std::move(targets));
}

StateMap child_prior_map(const ChildUnit& child, double gamma) {
  return ucb_map(child.model, gamma);
}

StateMap average_prior(const std::vector<StateMap>& maps, const Grid& joint) {
  if (static_cast<int>(maps.size()) != joint.dims())
    throw std::invalid_argument("average_prior: need one child map per joint dimension");
  for (int d = 0; d < joint.dims(); ++d) {
    if (static_cast<int>(maps[d].size()) != joint.axis_size(d))
      throw std::invalid_argument("average_prior: map does not match axis " + std::to_string(d));
  }
  StateMap avg(joint.size());
  const double inv = 1.0 / static_cast<double>(joint.dims());
  for (int x = 0; x < joint.size(); ++x) {
    double sum = 0.0;
    for (int d = 0; d < joint.dims(); ++d) sum += maps[d][joint.component(x, d)];
    avg[x] = sum * inv;
  }
  return avg;
}

ContributionWeights contributions(const std::vector<ChildUnit>& children, int joint_state,
                                  const Grid& joint, double gamma) {
  if (children.empty()) throw std::invalid_argument("contributions: no children");
  const int n = static_cast<int>(children.size());
  ContributionWeights out;
  out.scores.resize(n);
  for (int s = 0; s < n; ++s) {
    const StateMap u = ucb_map(children[s].model, gamma);
    const double best = *std::max_element(u.begin(), u.end());
    const int comp = joint.component(joint_state, children[s].axis);
    out.scores[s] = std::abs(best) <= kMaxGuard ? 0.0 : u[comp] / best;
  }
  // shifted softmax; the shift cancels and keeps the exponents tame
  const double shift = *std::max_element(out.scores.begin(), out.scores.end());
  out.weights.resize(n);
  double total = 0.0;
  for (int s = 0; s < n; ++s) {
    out.weights[s] = std::exp(out.scores[s] - shift);
    total += out.weights[s];
  }
  for (double& w : out.weights) w /= total;
  return out;
}

std::vector<double> partition_response(double y_p, const ContributionWeights& w) {
  if (w.weights.empty()) throw std::invalid_argument("partition_response: empty weights");
  std::vector<double> shares(w.weights.size());
  for (std::size_t s = 0; s < shares.size(); ++s) shares[s] = y_p * w.weights[s];
  return shares;
}

InitSample draw_initialization(const Environment& env, int r, std::mt19937_64& draw_rng,
                               std::mt19937_64& noise_rng) {
  if (r < 1) throw std::invalid_argument("initialization size must be at least 1");
  if (r > env.grid().size())
    throw std::invalid_argument("initialization size exceeds the grid size");
  InitSample sample;
  sample.states = sample_distinct(env.grid().size(), r, draw_rng);
  sample.results.reserve(sample.states.size());
  for (int x : sample.states) sample.results.push_back(env.query(x, noise_rng, true));
  return sample;
}

Hierarchy::Hierarchy(const Grid& joint, AcquisitionConfig acq, OptimizerConfig opt)
    : joint_(joint), acq_(acq), opt_(opt), parent_(joint, KernelMode::kAdditive) {
  if (acq_.kappa < 0.0 || acq_.gamma < 0.0)
    throw std::invalid_argument("Hierarchy: kappa and gamma must be non-negative");
  children_.reserve(joint_.dims());
  for (int d = 0; d < joint_.dims(); ++d) children_.emplace_back(joint_.axis_grid(d), d);
}

void Hierarchy::initialize(const Environment& env, int r, std::mt19937_64& draw_rng,
                           std::mt19937_64& noise_rng, std::vector<std::string>* warnings,
                           const std::vector<bool>& fresh_mask) {
  if (!(env.grid() == joint_)) throw std::invalid_argument("Hierarchy: environment grid mismatch");
  if (!fresh_mask.empty() && static_cast<int>(fresh_mask.size()) != joint_.dims())
    throw std::invalid_argument("Hierarchy: fresh mask length mismatch");
  auto fresh = [&](int d) { return fresh_mask.empty() || fresh_mask[d]; };

  const InitSample sample = draw_initialization(env, r, draw_rng, noise_rng);
  for (std::size_t i = 0; i < sample.states.size(); ++i) {
    const int x = sample.states[i];
    const QueryResult& obs = sample.results[i];
    if (obs.clamped && warnings) warnings->push_back("clamp");
    parent_.add_observation(x, obs.parent);
    parent_.increment_counter(x);
    for (int d = 0; d < joint_.dims(); ++d) {
      if (!fresh(d)) continue;
      const int comp = joint_.component(x, d);
      children_[d].add_true(comp, obs.children[d]);
      children_[d].model.increment_counter(comp);
    }
  }
  for (int d = 0; d < joint_.dims(); ++d) {
    if (fresh(d)) children_[d].rebuild();
  }

  // The parent's initialization fit runs against the zero prior; the first
  // child-derived prior is installed afterwards, so that a hierarchy with no
  // query budget matches the frozen-children baseline state for state.
  note_fit(parent_.fit(opt_), "init_fit_parent", warnings);
  for (int d = 0; d < joint_.dims(); ++d) {
    if (fresh(d))
      note_fit(children_[d].model.fit(opt_), "init_fit_child" + std::to_string(d), warnings);
  }
  refresh_parent_prior();
}

const std::vector<double>& Hierarchy::refresh_parent_prior() {
  std::vector<StateMap> maps;
  maps.reserve(children_.size());
  for (const ChildUnit& child : children_) maps.push_back(child_prior_map(child, acq_.gamma));
  parent_.set_prior_mean(average_prior(maps, joint_));
  return parent_.prior_mean();
}

QueryRecord Hierarchy::bif_query_step(const Environment& env, std::mt19937_64& noise_rng) {
  QueryRecord rec;
  refresh_parent_prior();
  rec.state = select_query(ucb_map(parent_, acq_.kappa));

  const QueryResult obs = env.query(rec.state, noise_rng, false);
  rec.response = obs.parent;
  if (obs.clamped) rec.warnings.push_back("clamp");

  const ContributionWeights cw = contributions(children_, rec.state, joint_, acq_.gamma);
  rec.weights = cw.weights;
  const std::vector<double> shares = partition_response(obs.parent, cw);

  parent_.add_observation(rec.state, obs.parent);
  for (int d = 0; d < joint_.dims(); ++d) {
    children_[d].add_inferred(joint_.component(rec.state, d), shares[d]);
    children_[d].rebuild();
  }

  parent_.increment_counter(rec.state);
  for (int d = 0; d < joint_.dims(); ++d)
    children_[d].model.increment_counter(joint_.component(rec.state, d));

  note_fit(parent_.fit(opt_), "fit_parent", &rec.warnings);
  for (int d = 0; d < joint_.dims(); ++d)
    note_fit(children_[d].model.fit(opt_), "fit_child" + std::to_string(d), &rec.warnings);
  return rec;
}

}  // namespace bif
