#pragma once

namespace bif {

// ADAM settings for marginal-likelihood training. Moment state is not kept
// between fit() calls; every call starts a fresh optimizer.
struct OptimizerConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int steps = 10;
};

}  // namespace bif
