#include "bif/gp_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace bif {

namespace {

constexpr double kJitterLevels[] = {0.0, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4};

}  // namespace

GpModel::GpModel(Grid grid, KernelMode mode) : grid_(std::move(grid)), mode_(mode) {
  if (grid_.dims() < 1) throw std::invalid_argument("GpModel: grid must have at least one axis");
  const int nparams = mode_ == KernelMode::kAdditive ? grid_.dims() : 1;
  kparams_.assign(nparams, KernelParams{});
  prior_mean_.assign(grid_.size(), 0.0);
  counters_.assign(grid_.size(), 0);
}

Eigen::VectorXd GpModel::log_params() const {
  const int p = static_cast<int>(kparams_.size());
  Eigen::VectorXd lp(2 * p + 1);
  for (int i = 0; i < p; ++i) lp[i] = std::log(kparams_[i].lengthscale);
  for (int i = 0; i < p; ++i) lp[p + i] = std::log(kparams_[i].outputscale);
  lp[2 * p] = std::log(noise_);
  return lp;
}

void GpModel::set_log_params(const Eigen::VectorXd& lp) {
  const int p = static_cast<int>(kparams_.size());
  if (lp.size() != 2 * p + 1) throw std::invalid_argument("GpModel: log-parameter size mismatch");
  for (int i = 0; i < p; ++i) kparams_[i].lengthscale = std::exp(lp[i]);
  for (int i = 0; i < p; ++i) kparams_[i].outputscale = std::exp(lp[p + i]);
  noise_ = std::exp(lp[2 * p]);
}

void GpModel::check_state(int flat_state, const char* who) const {
  if (!grid_.contains(flat_state))
    throw std::invalid_argument(std::string(who) + ": state " + std::to_string(flat_state) +
                                " is off the grid (size " + std::to_string(grid_.size()) + ")");
}

void GpModel::add_observation(int flat_state, double target) {
  check_state(flat_state, "GpModel::add_observation");
  train_states_.push_back(flat_state);
  train_targets_.push_back(target);
}

void GpModel::set_data(std::vector<int> flat_states, std::vector<double> targets) {
  if (flat_states.size() != targets.size())
    throw std::invalid_argument("GpModel::set_data: inputs and targets differ in length");
  for (int s : flat_states) check_state(s, "GpModel::set_data");
  train_states_ = std::move(flat_states);
  train_targets_ = std::move(targets);
}

void GpModel::set_prior_mean(std::vector<double> flat_map) {
  if (static_cast<int>(flat_map.size()) != grid_.size())
    throw std::invalid_argument("GpModel::set_prior_mean: map size does not match grid");
  prior_mean_ = std::move(flat_map);
}

void GpModel::increment_counter(int flat_state) {
  check_state(flat_state, "GpModel::increment_counter");
  ++counters_[flat_state];
}

int GpModel::counter(int flat_state) const {
  check_state(flat_state, "GpModel::counter");
  return counters_[flat_state];
}

Eigen::MatrixXd GpModel::coords_of(const std::vector<int>& states) const {
  Eigen::MatrixXd coords(states.size(), grid_.dims());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (int d = 0; d < grid_.dims(); ++d)
      coords(static_cast<Eigen::Index>(i), d) = static_cast<double>(grid_.component(states[i], d));
  }
  return coords;
}

Eigen::MatrixXd GpModel::train_coords() const { return coords_of(train_states_); }

Eigen::MatrixXd GpModel::cross_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(a.rows(), b.rows());
  if (mode_ == KernelMode::kIsotropic) {
    const KernelParams& p = kparams_[0];
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < b.rows(); ++j)
        k(i, j) = matern12((a.row(i) - b.row(j)).norm(), p);
  } else {
    for (int d = 0; d < grid_.dims(); ++d) {
      const KernelParams& p = kparams_[d];
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < b.rows(); ++j)
          k(i, j) += matern12(std::abs(a(i, d) - b(j, d)), p);
    }
  }
  return k;
}

double GpModel::kernel_diag() const {
  double v = 0.0;
  for (const auto& p : kparams_) v += p.outputscale;
  return v;
}

GpModel::Factorization GpModel::factor_system(const Eigen::MatrixXd& gram) const {
  const Eigen::Index n = gram.rows();
  std::ostringstream tried;
  for (double jitter : kJitterLevels) {
    Eigen::MatrixXd sys = gram;
    sys.diagonal().array() += noise_ + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(sys);
    if (llt.info() == Eigen::Success) return {std::move(llt), jitter};
    tried << (tried.tellp() > 0 ? ", " : "") << jitter;
  }
  throw NumericalError("GpModel: Cholesky failed for " + std::to_string(n) +
                       "x" + std::to_string(n) + " system; attempted jitters: " + tried.str());
}

PosteriorResult GpModel::posterior(const std::vector<int>& flat_states) const {
  for (int s : flat_states) check_state(s, "GpModel::posterior");
  const Eigen::Index q = static_cast<Eigen::Index>(flat_states.size());
  PosteriorResult out;
  out.mean.resize(q);
  out.variance.resize(q);
  for (Eigen::Index i = 0; i < q; ++i) out.mean[i] = prior_mean_[flat_states[i]];

  const double kdiag = kernel_diag();
  if (train_states_.empty()) {
    out.variance.setConstant(kdiag);
    return out;
  }

  const Eigen::MatrixXd x_train = train_coords();
  const Eigen::MatrixXd x_query = coords_of(flat_states);
  const Eigen::MatrixXd gram = cross_kernel(x_train, x_train);
  auto fact = factor_system(gram);

  Eigen::VectorXd resid(train_states_.size());
  for (std::size_t i = 0; i < train_states_.size(); ++i)
    resid[static_cast<Eigen::Index>(i)] = train_targets_[i] - prior_mean_[train_states_[i]];

  const Eigen::VectorXd alpha = fact.llt.solve(resid);
  const Eigen::MatrixXd kx = cross_kernel(x_train, x_query);  // n x q
  out.mean += kx.transpose() * alpha;

  const Eigen::MatrixXd v = fact.llt.matrixL().solve(kx);
  for (Eigen::Index i = 0; i < q; ++i)
    out.variance[i] = std::max(0.0, kdiag - v.col(i).squaredNorm());
  return out;
}

PosteriorResult GpModel::posterior_full() const {
  std::vector<int> all(grid_.size());
  for (int i = 0; i < grid_.size(); ++i) all[i] = i;
  return posterior(all);
}

NlmlResult GpModel::nlml_and_grad() const {
  const int n = train_size();
  if (n == 0) throw std::invalid_argument("GpModel::nlml_and_grad: empty training set");

  const Eigen::MatrixXd x = train_coords();
  const int p = static_cast<int>(kparams_.size());

  // Per-kernel component and distance matrices; for the isotropic mode there
  // is a single component over the joint Euclidean distance.
  std::vector<Eigen::MatrixXd> comps(p), dists(p);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < p; ++c) {
    comps[c].resize(n, n);
    dists[c].resize(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double d = mode_ == KernelMode::kIsotropic ? (x.row(i) - x.row(j)).norm()
                                                         : std::abs(x(i, c) - x(j, c));
        dists[c](i, j) = d;
        comps[c](i, j) = matern12(d, kparams_[c]);
      }
    }
    gram += comps[c];
  }

  auto fact = factor_system(gram);

  Eigen::VectorXd resid(n);
  for (int i = 0; i < n; ++i) resid[i] = train_targets_[i] - prior_mean_[train_states_[i]];
  const Eigen::VectorXd alpha = fact.llt.solve(resid);

  NlmlResult out;
  const auto& l = fact.llt.matrixLLT();
  double logdet_half = 0.0;
  for (int i = 0; i < n; ++i) logdet_half += std::log(l(i, i));
  out.value = 0.5 * resid.dot(alpha) + logdet_half +
              0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

  // dNLML/dtheta = 0.5 tr((A^-1 - alpha alpha') dA/dtheta)
  const Eigen::MatrixXd a_inv = fact.llt.solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd w = a_inv - alpha * alpha.transpose();

  out.grad.resize(2 * p + 1);
  for (int c = 0; c < p; ++c) {
    // d k / d log l = k * d / l ;  d k / d log s = k
    const Eigen::MatrixXd dk_dlogl =
        comps[c].cwiseProduct(dists[c]) / kparams_[c].lengthscale;
    out.grad[c] = 0.5 * w.cwiseProduct(dk_dlogl).sum();
    out.grad[p + c] = 0.5 * w.cwiseProduct(comps[c]).sum();
  }
  out.grad[2 * p] = 0.5 * noise_ * w.trace();
  return out;
}

bool GpModel::fit(const OptimizerConfig& opt) {
  if (opt.steps == 0) return false;
  if (train_size() == 0)
    throw std::invalid_argument("GpModel::fit: empty training set with steps > 0");
  if (opt.learning_rate <= 0.0) throw std::invalid_argument("GpModel::fit: learning rate must be positive");

  const Eigen::VectorXd initial = log_params();
  Eigen::VectorXd theta = initial;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());

  for (int t = 1; t <= opt.steps; ++t) {
    NlmlResult res;
    try {
      res = nlml_and_grad();
    } catch (const NumericalError&) {
      set_log_params(initial);
      return true;
    }
    if (!std::isfinite(res.value) || !res.grad.allFinite()) {
      set_log_params(initial);
      return true;
    }
    m = opt.beta1 * m + (1.0 - opt.beta1) * res.grad;
    v = opt.beta2 * v + (1.0 - opt.beta2) * res.grad.cwiseProduct(res.grad);
    const double bc1 = 1.0 - std::pow(opt.beta1, t);
    const double bc2 = 1.0 - std::pow(opt.beta2, t);
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      theta[i] -= opt.learning_rate * mhat / (std::sqrt(vhat) + opt.epsilon);
    }
    set_log_params(theta);
  }
  return false;
}

}  // namespace bif
