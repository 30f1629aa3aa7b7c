#include "bif/acquisition.hpp"

#include <cmath>
#include <stdexcept>

namespace bif {

StateMap ucb_from_posterior(const PosteriorResult& post, const std::vector<int>& counters,
                            double weight) {
  if (weight < 0.0) throw std::invalid_argument("ucb_map: weight must be non-negative");
  if (post.mean.size() != static_cast<Eigen::Index>(counters.size()))
    throw std::invalid_argument("ucb_map: posterior and counters disagree in size");
  StateMap values(counters.size());
  for (std::size_t i = 0; i < counters.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const double sigma = std::sqrt(post.variance[idx]);
    values[i] = post.mean[idx] + weight * sigma / std::sqrt(static_cast<double>(counters[i]) + 1.0);
  }
  return values;
}

StateMap ucb_map(const GpModel& model, double weight) {
  return ucb_from_posterior(model.posterior_full(), model.counters(), weight);
}

int select_query(const StateMap& values) {
  if (values.empty()) throw std::invalid_argument("select_query: empty map");
  int best = -1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i]))
      throw std::invalid_argument("select_query: NaN at state " + std::to_string(i));
    if (best < 0 || values[i] > values[best]) best = static_cast<int>(i);
  }
  return best;
}

}  // namespace bif
