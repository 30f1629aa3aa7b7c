#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace bif {

// Matern covariance with smoothness fixed at nu = 1/2, which has the closed
// form k(a,b) = outputscale * exp(-d(a,b) / lengthscale). Positivity of both
// hyperparameters is maintained by optimizing their logarithms (see GpModel).
struct KernelParams {
  double lengthscale = 1.0;
  double outputscale = 1.0;
};

inline double matern12(double distance, const KernelParams& p) {
  return p.outputscale * std::exp(-distance / p.lengthscale);
}

// k(a, b) with d the Euclidean distance between states in grid-index units.
inline double kernel_eval(std::span<const double> a, std::span<const double> b,
                          const KernelParams& params) {
  if (a.size() != b.size())
    throw std::invalid_argument("kernel_eval: state dimensionality mismatch");
  if (a.empty()) throw std::invalid_argument("kernel_eval: empty state");
  double sq = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    sq += diff * diff;
  }
  return matern12(std::sqrt(sq), params);
}

// Sum of one-dimensional Matern-1/2 kernels, one per input dimension.
inline double additive_kernel_eval(std::span<const double> a, std::span<const double> b,
                                   std::span<const KernelParams> per_dim) {
  if (per_dim.empty()) throw std::invalid_argument("additive_kernel_eval: no kernels");
  if (a.size() != b.size() || a.size() != per_dim.size())
    throw std::invalid_argument("additive_kernel_eval: state dimensionality mismatch");
  double sum = 0.0;
  for (std::size_t d = 0; d < per_dim.size(); ++d) {
    sum += matern12(std::abs(a[d] - b[d]), per_dim[d]);
  }
  return sum;
}

}  // namespace bif
