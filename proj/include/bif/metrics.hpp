#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bif/acquisition.hpp"
#include "bif/environment.hpp"
#include "bif/hierarchy.hpp"

namespace bif {

struct QueryMetrics {
  int query_index = 0;
  double ro = 0.0;
  double parent_r2 = 0.0;
  std::optional<double> child_r2;  // absent for strategies without children
  double cumulative_auc = 0.0;
  std::vector<std::string> warnings;
};

struct Trajectory {
  std::string run_id;
  std::string setting;
  std::string strategy;
  int repeat = 0;
  std::uint64_t seed = 0;
  std::vector<int> init_states;  // parent initialization states, in draw order
  std::vector<QueryMetrics> queries;
  std::string error;  // non-empty when the run aborted
};

// Percentage of the true optimum attained at the UCB argmax:
// 100 * y(x_hat) / y(x_star), clamped to [0, 100]. The noiseless optimum must
// be positive.
double relative_optimum(const GpModel& parent, const Environment& env, double kappa);
double relative_optimum_from(const StateMap& acq_map, const std::vector<double>& truth);

// 100 * max(Pearson rho, 0)^2 between the two maps; 0 when either map is
// constant.
double r_squared(const std::vector<double>& predicted, const std::vector<double>& truth);

// Mean r_squared of the children's posterior mean maps against the true
// child maps. Pearson invariance makes the children's rescaled units moot.
double child_r2_mean(const std::vector<ChildUnit>& children, const Environment& env);

// Sum over queries of ro + parent_r2 + child_r2 (children omitted where
// absent), all in percentage units.
double global_auc(const Trajectory& traj);

}  // namespace bif
