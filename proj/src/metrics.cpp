#include "bif/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bif {

double relative_optimum_from(const StateMap& acq_map, const std::vector<double>& truth) {
  if (acq_map.size() != truth.size())
    throw std::invalid_argument("relative_optimum: map sizes differ");
  const double best_true = *std::max_element(truth.begin(), truth.end());
  if (!(best_true > 0.0))
    throw std::domain_error("relative_optimum: the noiseless optimum must be positive");
  const int chosen = select_query(acq_map);
  return std::clamp(100.0 * truth[chosen] / best_true, 0.0, 100.0);
}

double relative_optimum(const GpModel& parent, const Environment& env, double kappa) {
  return relative_optimum_from(ucb_map(parent, kappa), env.parent_map());
}

double r_squared(const std::vector<double>& predicted, const std::vector<double>& truth) {
  if (predicted.size() != truth.size() || predicted.empty())
    throw std::invalid_argument("r_squared: maps must be non-empty and equal-sized");
  const double n = static_cast<double>(predicted.size());
  double mean_p = 0.0, mean_t = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    mean_p += predicted[i];
    mean_t += truth[i];
  }
  mean_p /= n;
  mean_t /= n;
  double spp = 0.0, stt = 0.0, spt = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double dp = predicted[i] - mean_p;
    const double dt = truth[i] - mean_t;
    spp += dp * dp;
    stt += dt * dt;
    spt += dp * dt;
  }
  if (spp <= 0.0 || stt <= 0.0) return 0.0;
  double rho = spt / std::sqrt(spp * stt);
  if (!std::isfinite(rho)) return 0.0;
  rho = std::clamp(rho, -1.0, 1.0);
  const double floored = std::max(rho, 0.0);
  return 100.0 * floored * floored;
}

double child_r2_mean(const std::vector<ChildUnit>& children, const Environment& env) {
  if (children.empty()) throw std::invalid_argument("child_r2_mean: no children");
  double sum = 0.0;
  for (const ChildUnit& child : children) {
    const PosteriorResult post = child.model.posterior_full();
    const std::vector<double> predicted(post.mean.data(), post.mean.data() + post.mean.size());
    sum += r_squared(predicted, env.child_map(child.axis));
  }
  return sum / static_cast<double>(children.size());
}

double global_auc(const Trajectory& traj) {
  if (traj.queries.empty()) throw std::invalid_argument("global_auc: empty trajectory");
  double total = 0.0;
  for (const QueryMetrics& q : traj.queries)
    total += q.ro + q.parent_r2 + q.child_r2.value_or(0.0);
  return total;
}

}  // namespace bif
