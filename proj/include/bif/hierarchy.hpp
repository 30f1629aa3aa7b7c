#pragma once

#include <random>
#include <string>
#include <vector>

#include "bif/acquisition.hpp"
#include "bif/environment.hpp"
#include "bif/gp_model.hpp"
#include "bif/rescale.hpp"

namespace bif {

// Outcome of one query round.
struct QueryRecord {
  int state = -1;
  double response = 0.0;
  std::vector<double> weights;        // per-child contribution weights; empty
                                      // for strategies without downward flow
  std::vector<std::string> warnings;  // "clamp", "fit_parent", "fit_child0", ...
};

// One child GP plus its two raw response streams. The model's training
// targets are always the two streams passed through their own min-max
// transforms, true stream first (insertion order), all values in [0,1].
struct ChildUnit {
  ChildUnit(Grid axis_grid, int axis_index)
      : model(std::move(axis_grid), KernelMode::kIsotropic), axis(axis_index) {}

  void add_true(int axis_state, double raw) {
    true_states.push_back(axis_state);
    true_raw.push_back(raw);
  }
  void add_inferred(int axis_state, double raw) {
    inferred_states.push_back(axis_state);
    inferred_raw.push_back(raw);
  }

  // Refits both transforms from scratch and rewrites the model's training
  // set. Counters are not touched here.
  void rebuild();

  GpModel model;
  int axis = 0;
  std::vector<int> true_states;
  std::vector<double> true_raw;
  std::vector<int> inferred_states;
  std::vector<double> inferred_raw;
  RescaleTransform transform_true;
  RescaleTransform transform_inferred;
};

struct ContributionWeights {
  std::vector<double> scores;   // c_s, each child's UCB relative to its own max
  std::vector<double> weights;  // softmax(scores), sums to 1
};

// Child UCB map with the prior weight gamma, over the child's 1-D grid.
StateMap child_prior_map(const ChildUnit& child, double gamma);

// Broadcasts each child's 1-D map along its axis and averages:
// p_avg(x) = (1/D) sum_s p_s(x_s).
StateMap average_prior(const std::vector<StateMap>& maps, const Grid& joint);

// c_s = u_s(x_s) / max over the child's grid of u_s, with u_s the child UCB
// at weight gamma; a max within 1e-12 of zero yields c_s = 0. Weights are the
// softmax over the scores.
ContributionWeights contributions(const std::vector<ChildUnit>& children, int joint_state,
                                  const Grid& joint, double gamma);

// y_s = y_p * w_s; the shares sum back to y_p.
std::vector<double> partition_response(double y_p, const ContributionWeights& w);

// r distinct joint states drawn uniformly, each queried with sub-responses.
struct InitSample {
  std::vector<int> states;
  std::vector<QueryResult> results;
};
InitSample draw_initialization(const Environment& env, int r, std::mt19937_64& draw_rng,
                               std::mt19937_64& noise_rng);

// Parent GP over the joint grid (additive kernel) plus one child per axis.
class Hierarchy {
 public:
  Hierarchy(const Grid& joint, AcquisitionConfig acq, OptimizerConfig opt);

  GpModel& parent() { return parent_; }
  const GpModel& parent() const { return parent_; }
  std::vector<ChildUnit>& children() { return children_; }
  const std::vector<ChildUnit>& children() const { return children_; }
  const Grid& joint_grid() const { return joint_; }
  const AcquisitionConfig& acq() const { return acq_; }

  // Draws r joint states, feeds the parent raw responses and the unmasked
  // children their true sub-responses, fits everything, then installs the
  // first averaged child prior into the parent. fresh_mask (empty = all
  // fresh) excludes pre-trained children from initialization data.
  void initialize(const Environment& env, int r, std::mt19937_64& draw_rng,
                  std::mt19937_64& noise_rng, std::vector<std::string>* warnings,
                  const std::vector<bool>& fresh_mask = {});

  // One full loop round: upward prior flow, parent UCB query, environment
  // observation, downward partitioned flow, counter updates, training.
  QueryRecord bif_query_step(const Environment& env, std::mt19937_64& noise_rng);

  // Recomputes child prior maps and installs their average as the parent's
  // prior mean; returns the installed map.
  const std::vector<double>& refresh_parent_prior();

 private:
  Grid joint_;
  AcquisitionConfig acq_;
  OptimizerConfig opt_;
  GpModel parent_;
  std::vector<ChildUnit> children_;
};

}  // namespace bif
