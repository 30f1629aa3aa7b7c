#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bif/hierarchy.hpp"

namespace bif {

// Common surface for the three query strategies. One instance drives one
// run: initialize once, then step per query.
class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual std::string_view name() const = 0;
  virtual void initialize(const Environment& env, int init_size, std::mt19937_64& draw_rng,
                          std::mt19937_64& noise_rng) = 0;
  virtual QueryRecord step(const Environment& env, std::mt19937_64& noise_rng) = 0;
  virtual const GpModel& parent_model() const = 0;
  // Null for strategies without child models.
  virtual const std::vector<ChildUnit>* child_units() const = 0;

  const std::vector<std::string>& init_warnings() const { return init_warnings_; }

 protected:
  std::vector<std::string> init_warnings_;
};

// Full bidirectional loop.
class BifStrategy final : public Strategy {
 public:
  BifStrategy(const Grid& joint, AcquisitionConfig acq, OptimizerConfig opt)
      : hier_(joint, acq, opt), fresh_mask_(joint.dims(), true) {}

  std::string_view name() const override { return "bif"; }
  void initialize(const Environment& env, int init_size, std::mt19937_64& draw_rng,
                  std::mt19937_64& noise_rng) override;
  QueryRecord step(const Environment& env, std::mt19937_64& noise_rng) override;
  const GpModel& parent_model() const override { return hier_.parent(); }
  const std::vector<ChildUnit>* child_units() const override { return &hier_.children(); }

  // Replaces one child with a pre-trained unit; the slot is then skipped by
  // random initialization (modularity transfer).
  void install_child(int slot, ChildUnit unit);

  Hierarchy& hierarchy() { return hier_; }
  const Hierarchy& hierarchy() const { return hier_; }

 private:
  Hierarchy hier_;
  std::vector<bool> fresh_mask_;
};

// Unidirectional baseline: children learn only from initialization, the
// parent prior they induce is computed once and never changes.
class LaferriereStrategy final : public Strategy {
 public:
  LaferriereStrategy(const Grid& joint, AcquisitionConfig acq, OptimizerConfig opt)
      : hier_(joint, acq, opt), opt_(opt) {}

  std::string_view name() const override { return "laferriere"; }
  void initialize(const Environment& env, int init_size, std::mt19937_64& draw_rng,
                  std::mt19937_64& noise_rng) override;
  QueryRecord step(const Environment& env, std::mt19937_64& noise_rng) override;
  const GpModel& parent_model() const override { return hier_.parent(); }
  const std::vector<ChildUnit>* child_units() const override { return &hier_.children(); }

  const std::vector<double>& cached_prior() const { return cached_prior_; }
  const Hierarchy& hierarchy() const { return hier_; }

 private:
  Hierarchy hier_;
  OptimizerConfig opt_;
  std::vector<double> cached_prior_;
};

// Flat GP-BO over the joint grid with a single isotropic kernel.
class VanillaStrategy final : public Strategy {
 public:
  VanillaStrategy(const Grid& joint, AcquisitionConfig acq, OptimizerConfig opt)
      : model_(joint, KernelMode::kIsotropic), acq_(acq), opt_(opt) {}

  std::string_view name() const override { return "vanilla"; }
  void initialize(const Environment& env, int init_size, std::mt19937_64& draw_rng,
                  std::mt19937_64& noise_rng) override;
  QueryRecord step(const Environment& env, std::mt19937_64& noise_rng) override;
  const GpModel& parent_model() const override { return model_; }
  const std::vector<ChildUnit>* child_units() const override { return nullptr; }

 private:
  GpModel model_;
  AcquisitionConfig acq_;
  OptimizerConfig opt_;
};

enum class StrategyKind { kBif, kLaferriere, kVanilla };

std::string to_string(StrategyKind kind);
StrategyKind parse_strategy(const std::string& name);

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, const Grid& joint,
                                        AcquisitionConfig acq, OptimizerConfig opt);

}  // namespace bif
