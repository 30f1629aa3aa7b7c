#pragma once

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "bif/grid.hpp"

namespace bif {

struct NoiseSpec {
  double beta = 0.0;   // noise scale (fraction of the response range)
  double range = 0.0;  // max - min of the noiseless parent map
};

struct QueryResult {
  double parent = 0.0;
  std::vector<double> children;  // filled only when with_children
  bool clamped = false;          // nonlinearity combiner clamped a negative base
};

// A discrete benchmark objective: per-dimension child functions combined into
// a parent response, observed under additive Gaussian noise. Noiseless maps
// are exposed separately for metric computation.
class Environment {
 public:
  virtual ~Environment() = default;

  const Grid& grid() const { return grid_; }
  int dims() const { return grid_.dims(); }
  double noise_beta() const { return noise_.beta; }
  double response_range() const { return noise_.range; }
  double child_range(int d) const { return child_ranges_.at(d); }

  // Noiseless values.
  virtual double parent_value(int flat_state) const = 0;
  virtual double child_value(int d, int axis_idx) const = 0;
  const std::vector<double>& parent_map() const { return parent_map_; }
  const std::vector<double>& child_map(int d) const { return child_maps_.at(d); }

  // One observation: y + beta * phi with phi ~ Normal(0, sd = range). Child
  // sub-responses, perturbed by their own ranges, are drawn only when
  // with_children is set (initialization queries).
  QueryResult query(int flat_state, std::mt19937_64& rng, bool with_children) const;

 protected:
  // Fills parent_map_, child_maps_, ranges from the virtual evaluators; call
  // at the end of subclass construction.
  void finalize(Grid grid, double beta);

  virtual bool combiner_clamps(int flat_state) const { return false; }

  Grid grid_;
  NoiseSpec noise_;
  std::vector<double> parent_map_;
  std::vector<std::vector<double>> child_maps_;
  std::vector<double> child_ranges_;
};

using ChildFn = std::function<double(double)>;
// coords are domain values; child_vals the per-dimension child responses.
using CombinerFn =
    std::function<double(const std::vector<double>& coords, const std::vector<double>& child_vals,
                         bool* clamped)>;

class SyntheticEnv final : public Environment {
 public:
  SyntheticEnv(Grid grid, std::vector<ChildFn> children, CombinerFn combiner, double beta);

  double parent_value(int flat_state) const override;
  double child_value(int d, int axis_idx) const override;

 private:
  bool combiner_clamps(int flat_state) const override;
  double combine(int flat_state, bool* clamped) const;

  std::vector<ChildFn> child_fns_;
  CombinerFn combiner_;
};

struct NonlinearitySpec {
  enum class Variant { kExponential, kExponentialInside, kMultiplicative };
  Variant variant = Variant::kMultiplicative;
  double alpha = 1.0;
};

NonlinearitySpec::Variant parse_nonlinearity_variant(const std::string& name);

// Combines two child responses under the chosen nonlinearity. Exponential
// variants clamp a negative base at 0 and report it through `clamped`.
double nonlinear_combine(const NonlinearitySpec& spec, double f, double g, bool* clamped);

// Benchmark factories. All take the observation-noise scale beta.
std::unique_ptr<Environment> synth2d(double beta);
std::unique_ptr<Environment> synth3d(double beta);
std::unique_ptr<Environment> nonlinear_env(const NonlinearitySpec& spec, double beta);
std::unique_ptr<Environment> modularity_env(int task, double beta);  // task in {1,2,3}

// Table-backed environment loaded from a CSV dataset (see dataset_io).
class DatasetEnv final : public Environment {
 public:
  // rows: flat state -> (parent, per-child responses), already grid-ordered.
  DatasetEnv(Grid grid, std::vector<double> parent_rows,
             std::vector<std::vector<double>> child_rows, double beta);

  double parent_value(int flat_state) const override;
  double child_value(int d, int axis_idx) const override;

 private:
  std::vector<double> parent_rows_;
  std::vector<std::vector<double>> child_rows_;  // per dim, per axis index
};

}  // namespace bif
