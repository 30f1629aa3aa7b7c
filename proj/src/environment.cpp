#include "bif/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bif {

namespace {

// Offset keeping the (x-y)^2 denominators away from zero on the diagonal.
constexpr double kDenomOffset = 0.5;

double sine_child_f(double x) { return std::sin(2.0 * std::numbers::pi * x) / (x - 1.0) + 2.0; }
double sine_child_g(double y) { return std::sin(2.0 * std::numbers::pi * y) / (y - 2.0) + 2.0; }

double modular_f(double x) { return -(x - 2.0) * (x - 2.0) + 2.0; }
double modular_g(double y) {
  const double u = (y - 1.0) / 2.0;
  return -(u * u * u * u) + 2.0;
}

Grid square_grid(double lo, double hi, int count, int dims) {
  std::vector<AxisSpec> specs(dims, AxisSpec{lo, hi, count});
  return Grid::uniform(specs);
}

CombinerFn ratio_combiner(double extra_offset) {
  return [extra_offset](const std::vector<double>& coords, const std::vector<double>& vals,
                        bool*) {
    const double d = coords[0] - coords[1];
    return (vals[0] + vals[1]) / (d * d + extra_offset + kDenomOffset);
  };
}

}  // namespace

void Environment::finalize(Grid grid, double beta) {
  if (beta < 0.0) throw std::invalid_argument("Environment: noise beta must be non-negative");
  grid_ = std::move(grid);
  parent_map_.resize(grid_.size());
  for (int x = 0; x < grid_.size(); ++x) parent_map_[x] = parent_value(x);
  const auto [pmin, pmax] = std::minmax_element(parent_map_.begin(), parent_map_.end());
  noise_ = NoiseSpec{beta, *pmax - *pmin};

  child_maps_.resize(grid_.dims());
  child_ranges_.resize(grid_.dims());
  for (int d = 0; d < grid_.dims(); ++d) {
    child_maps_[d].resize(grid_.axis_size(d));
    for (int i = 0; i < grid_.axis_size(d); ++i) child_maps_[d][i] = child_value(d, i);
    const auto [cmin, cmax] = std::minmax_element(child_maps_[d].begin(), child_maps_[d].end());
    child_ranges_[d] = *cmax - *cmin;
  }
}

QueryResult Environment::query(int flat_state, std::mt19937_64& rng, bool with_children) const {
  if (!grid_.contains(flat_state))
    throw std::invalid_argument("Environment::query: state off the grid");
  QueryResult out;
  out.clamped = combiner_clamps(flat_state);
  std::normal_distribution<double> unit(0.0, 1.0);
  out.parent = parent_map_[flat_state] + noise_.beta * unit(rng) * noise_.range;
  if (with_children) {
    out.children.resize(dims());
    for (int d = 0; d < dims(); ++d) {
      const double truth = child_maps_[d][grid_.component(flat_state, d)];
      out.children[d] = truth + noise_.beta * unit(rng) * child_ranges_[d];
    }
  }
  return out;
}

SyntheticEnv::SyntheticEnv(Grid grid, std::vector<ChildFn> children, CombinerFn combiner,
                           double beta)
    : child_fns_(std::move(children)), combiner_(std::move(combiner)) {
  if (static_cast<int>(child_fns_.size()) != grid.dims())
    throw std::invalid_argument("SyntheticEnv: one child function per grid dimension required");
  if (!combiner_) throw std::invalid_argument("SyntheticEnv: missing combiner");
  finalize(std::move(grid), beta);
}

double SyntheticEnv::combine(int flat_state, bool* clamped) const {
  std::vector<double> coords(grid_.dims());
  std::vector<double> vals(grid_.dims());
  for (int d = 0; d < grid_.dims(); ++d) {
    coords[d] = grid_.coord(d, grid_.component(flat_state, d));
    vals[d] = child_fns_[d](coords[d]);
  }
  return combiner_(coords, vals, clamped);
}

double SyntheticEnv::parent_value(int flat_state) const { return combine(flat_state, nullptr); }

double SyntheticEnv::child_value(int d, int axis_idx) const {
  return child_fns_.at(d)(grid_.coord(d, axis_idx));
}

bool SyntheticEnv::combiner_clamps(int flat_state) const {
  bool clamped = false;
  combine(flat_state, &clamped);
  return clamped;
}

NonlinearitySpec::Variant parse_nonlinearity_variant(const std::string& name) {
  using V = NonlinearitySpec::Variant;
  if (name == "exponential") return V::kExponential;
  if (name == "exponential_inside") return V::kExponentialInside;
  if (name == "multiplicative") return V::kMultiplicative;
  throw std::invalid_argument("unknown nonlinearity variant: " + name);
}

double nonlinear_combine(const NonlinearitySpec& spec, double f, double g, bool* clamped) {
  using V = NonlinearitySpec::Variant;
  // pow(negative, non-integer) has no real value; the base is clamped at 0
  // and the event reported.
  auto safe_pow = [&](double base, double expo) {
    if (base < 0.0 && expo != std::floor(expo)) {
      if (clamped) *clamped = true;
      base = 0.0;
    }
    return std::pow(base, expo);
  };
  switch (spec.variant) {
    case V::kExponential:
      return safe_pow(f + g, spec.alpha);
    case V::kExponentialInside:
      return safe_pow(f, spec.alpha) + g;
    case V::kMultiplicative:
      return f + g + spec.alpha * f * g;
  }
  throw std::logic_error("nonlinear_combine: unhandled variant");
}

std::unique_ptr<Environment> synth2d(double beta) {
  return std::make_unique<SyntheticEnv>(square_grid(0.0, 0.9, 10, 2),
                                        std::vector<ChildFn>{sine_child_f, sine_child_g},
                                        ratio_combiner(0.0), beta);
}

std::unique_ptr<Environment> synth3d(double beta) {
  auto f = [](double x) { return -std::pow(x - 2.0, 5.0); };
  auto g = [](double y) { return std::pow(std::sin(y), 3.0); };
  auto k = [](double z) { return (std::log(z + 1.0) + 1.0) / (z + 1.0); };
  auto combiner = [](const std::vector<double>&, const std::vector<double>& vals, bool*) {
    const double s = vals[0] + vals[1] + vals[2];
    return s * s + 2.0;
  };
  return std::make_unique<SyntheticEnv>(square_grid(0.0, 0.9, 10, 3),
                                        std::vector<ChildFn>{f, g, k}, combiner, beta);
}

std::unique_ptr<Environment> nonlinear_env(const NonlinearitySpec& spec, double beta) {
  if (spec.alpha < 0.0) throw std::invalid_argument("nonlinear_env: alpha must be non-negative");
  auto combiner = [spec](const std::vector<double>&, const std::vector<double>& vals,
                         bool* clamped) {
    return nonlinear_combine(spec, vals[0], vals[1], clamped);
  };
  auto f = [](double x) { return std::sin(x); };
  auto g = [](double y) { return std::tanh(y); };
  return std::make_unique<SyntheticEnv>(square_grid(0.0, 3.0, 10, 2),
                                        std::vector<ChildFn>{f, g}, combiner, beta);
}

std::unique_ptr<Environment> modularity_env(int task, double beta) {
  const Grid grid = square_grid(0.0, 0.9, 10, 2);
  switch (task) {
    case 1:
      return std::make_unique<SyntheticEnv>(grid, std::vector<ChildFn>{modular_f, modular_g},
                                            ratio_combiner(0.0), beta);
    case 2:
      return std::make_unique<SyntheticEnv>(grid,
                                            std::vector<ChildFn>{sine_child_f, sine_child_g},
                                            ratio_combiner(0.0), beta);
    case 3:
      // Shares child 0 with task 1 and child 1 with task 2; flatter combiner.
      return std::make_unique<SyntheticEnv>(grid, std::vector<ChildFn>{modular_f, sine_child_g},
                                            ratio_combiner(2.0), beta);
    default:
      throw std::invalid_argument("modularity_env: task must be 1, 2, or 3");
  }
}

DatasetEnv::DatasetEnv(Grid grid, std::vector<double> parent_rows,
                       std::vector<std::vector<double>> child_rows, double beta)
    : parent_rows_(std::move(parent_rows)), child_rows_(std::move(child_rows)) {
  if (static_cast<int>(parent_rows_.size()) != grid.size())
    throw std::invalid_argument("DatasetEnv: one parent response per grid state required");
  if (static_cast<int>(child_rows_.size()) != grid.dims())
    throw std::invalid_argument("DatasetEnv: child response count does not match dimensionality");
  for (int d = 0; d < grid.dims(); ++d) {
    if (static_cast<int>(child_rows_[d].size()) != grid.axis_size(d))
      throw std::invalid_argument("DatasetEnv: child responses do not cover axis " +
                                  std::to_string(d));
  }
  finalize(std::move(grid), beta);
}

double DatasetEnv::parent_value(int flat_state) const { return parent_rows_.at(flat_state); }

double DatasetEnv::child_value(int d, int axis_idx) const {
  return child_rows_.at(d).at(axis_idx);
}

}  // namespace bif
