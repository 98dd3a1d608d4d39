#pragma once

#include "inquest/common.hpp"
#include "inquest/net.hpp"

#include <string>
#include <vector>

namespace inquest::nn {

enum class OptimizerKind { sgd, adam };

struct LrSchedule {
  Scalar start = 1e-3;
  Scalar end = 1e-3;
  long horizon = 1;  // steps until lr reaches `end`; clamped afterwards

  // lr(t) = start * (end/start)^(t/horizon)
  Scalar at(long step) const;
};

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  LrSchedule lr;
  Scalar beta1 = 0.9;
  Scalar beta2 = 0.999;
  Scalar eps = 1e-8;
};

// Applies gradients accumulated in one or more networks. Owns per-tensor
// Adam moments keyed by parameter order, which must stay stable between
// steps and across checkpoint reloads.
class Optimizer {
 public:
  Optimizer() = default;
  Optimizer(OptimizerConfig cfg, std::vector<Network*> nets);

  Scalar learning_rate() const { return cfg_.lr.at(t_); }
  long steps() const { return t_; }
  void step();

  std::string serialize() const;
  void restore(std::string_view bytes);  // nets must already be attached

 private:
  std::vector<Network::ParamView> views();

  OptimizerConfig cfg_;
  std::vector<Network*> nets_;
  long t_ = 0;
  std::vector<Vector> m_, v_;
};

}  // namespace inquest::nn
