#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "bif/grid.hpp"
#include "bif/kernel.hpp"
#include "bif/optimizer.hpp"

namespace bif {

// Raised when the jittered Cholesky factorization gives up; the message
// lists the jitter levels that were attempted.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class KernelMode {
  kIsotropic,  // one Matern-1/2 kernel over the joint state
  kAdditive,   // sum of per-dimension Matern-1/2 kernels
};

struct PosteriorResult {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;  // clamped at zero
};

struct NlmlResult {
  double value;
  Eigen::VectorXd grad;  // w.r.t. [log lengthscales.., log outputscales.., log noise]
};

// Exact Gaussian-process regression on a finite grid. States are identified
// by flat grid index; kernel distances are measured in grid-index units.
// Targets are modeled as residuals against an additive fixed prior mean.
class GpModel {
 public:
  GpModel(Grid grid, KernelMode mode);

  int dims() const { return grid_.dims(); }
  const Grid& grid() const { return grid_; }
  KernelMode kernel_mode() const { return mode_; }

  // Hyperparameters. The log-parameter vector is laid out as
  // [log l_0..l_{P-1}, log s_0..s_{P-1}, log noise], P = 1 or dims().
  const std::vector<KernelParams>& kernel_params() const { return kparams_; }
  double noise_variance() const { return noise_; }
  Eigen::VectorXd log_params() const;
  void set_log_params(const Eigen::VectorXd& lp);
  int num_log_params() const { return 2 * static_cast<int>(kparams_.size()) + 1; }

  // Training data (targets are in whatever units the caller maintains).
  void add_observation(int flat_state, double target);
  void set_data(std::vector<int> flat_states, std::vector<double> targets);
  int train_size() const { return static_cast<int>(train_states_.size()); }
  const std::vector<int>& train_states() const { return train_states_; }
  const std::vector<double>& train_targets() const { return train_targets_; }

  // Prior mean over the full grid (flat layout); defaults to all zero.
  void set_prior_mean(std::vector<double> flat_map);
  const std::vector<double>& prior_mean() const { return prior_mean_; }

  // Per-state query counters n(x), tracked separately from the training set.
  void increment_counter(int flat_state);
  int counter(int flat_state) const;
  const std::vector<int>& counters() const { return counters_; }

  // Posterior mean and variance at the given grid states:
  //   mu(x)     = m(x) + k_x' (K + noise I)^-1 (y - m(X))
  //   sigma2(x) = k(x,x) - k_x' (K + noise I)^-1 k_x
  PosteriorResult posterior(const std::vector<int>& flat_states) const;
  PosteriorResult posterior_full() const;

  // Negative log marginal likelihood of the residuals and its gradient on
  // the log-parameters.
  NlmlResult nlml_and_grad() const;

  // Runs exactly opt.steps ADAM updates on the log-parameters, with fresh
  // moment state. Returns true when a non-finite value or gradient aborted
  // the fit (hyperparameters are then left at their pre-call values).
  bool fit(const OptimizerConfig& opt);

 private:
  Eigen::MatrixXd train_coords() const;  // n x dims, multi-index components
  Eigen::MatrixXd coords_of(const std::vector<int>& states) const;
  Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const;
  double kernel_diag() const;  // k(x,x), constant across the grid
  void check_state(int flat_state, const char* who) const;

  struct Factorization {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter;
  };
  Factorization factor_system(const Eigen::MatrixXd& gram) const;

  Grid grid_;
  KernelMode mode_;
  std::vector<KernelParams> kparams_;
  double noise_ = 0.01;

  std::vector<int> train_states_;
  std::vector<double> train_targets_;
  std::vector<double> prior_mean_;
  std::vector<int> counters_;
};

}  // namespace bif
