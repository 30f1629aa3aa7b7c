#pragma once

#include <vector>

#include "bif/gp_model.hpp"

namespace bif {

// One real value per grid state, in the grid's flat row-major layout.
using StateMap = std::vector<double>;

struct AcquisitionConfig {
  double kappa = 7.5;  // parent selection weight
  double gamma = 3.0;  // child prior / contribution weight
};

// Counter-weighted upper confidence bound over the full grid:
//   value(x) = mu(x) + weight * sigma(x) / sqrt(n(x) + 1)
// The +1 keeps the score finite at unvisited states.
StateMap ucb_map(const GpModel& model, double weight);

// Same score from an already computed full-grid posterior, so callers that
// need both the posterior and the map pay for inference once.
StateMap ucb_from_posterior(const PosteriorResult& post, const std::vector<int>& counters,
                            double weight);

// Index of the maximum value; ties go to the lowest flat index. Rejects NaN.
int select_query(const StateMap& values);

}  // namespace bif
