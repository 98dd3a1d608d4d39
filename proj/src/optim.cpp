#include "inquest/optim.hpp"

#include "inquest/serialize.hpp"

#include <cmath>

namespace inquest::nn {

Scalar LrSchedule::at(long step) const {
  if (horizon <= 0 || start == end) return step >= horizon ? end : start;
  Scalar t = static_cast<Scalar>(std::min(step, horizon)) / static_cast<Scalar>(horizon);
  return start * std::pow(end / start, t);
}

Optimizer::Optimizer(OptimizerConfig cfg, std::vector<Network*> nets)
    : cfg_(cfg), nets_(std::move(nets)) {
  if (cfg_.lr.start <= 0 || cfg_.lr.end <= 0)
    throw ConfigError("learning rates must be positive");
  for (auto& view : views()) {
    m_.push_back(Vector::Zero(view.size));
    v_.push_back(Vector::Zero(view.size));
  }
}

std::vector<Network::ParamView> Optimizer::views() {
  std::vector<Network::ParamView> all;
  for (Network* net : nets_)
    for (auto& p : net->params()) all.push_back(p);
  return all;
}

void Optimizer::step() {
  const Scalar lr = learning_rate();
  auto params = views();
  if (params.size() != m_.size()) throw StateError("optimizer: parameter set changed");
  if (cfg_.kind == OptimizerKind::sgd) {
    for (auto& p : params) {
      Eigen::Map<Eigen::ArrayXd> value(p.value, p.size);
      Eigen::Map<const Eigen::ArrayXd> grad(p.grad, p.size);
      value -= lr * grad;
    }
  } else {
    const long t = t_ + 1;
    const Scalar bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<Scalar>(t));
    const Scalar bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<Scalar>(t));
    for (size_t i = 0; i < params.size(); ++i) {
      auto& p = params[i];
      Eigen::Map<Eigen::ArrayXd> value(p.value, p.size);
      Eigen::Map<const Eigen::ArrayXd> grad(p.grad, p.size);
      m_[i] = cfg_.beta1 * m_[i].array() + (1.0 - cfg_.beta1) * grad;
      v_[i] = cfg_.beta2 * v_[i].array() + (1.0 - cfg_.beta2) * grad.square();
      Eigen::ArrayXd mhat = m_[i].array() / bc1;
      Eigen::ArrayXd vhat = v_[i].array() / bc2;
      value -= lr * mhat / (vhat.sqrt() + cfg_.eps);
    }
  }
  ++t_;
}

std::string Optimizer::serialize() const {
  io::Writer w;
  w.u8(cfg_.kind == OptimizerKind::adam ? 1 : 0);
  w.f64(cfg_.lr.start);
  w.f64(cfg_.lr.end);
  w.i64(cfg_.lr.horizon);
  w.f64(cfg_.beta1);
  w.f64(cfg_.beta2);
  w.f64(cfg_.eps);
  w.i64(t_);
  w.u64(m_.size());
  for (size_t i = 0; i < m_.size(); ++i) {
    w.vec(m_[i]);
    w.vec(v_[i]);
  }
  return w.take();
}

void Optimizer::restore(std::string_view bytes) {
  io::Reader r(bytes);
  cfg_.kind = r.u8() ? OptimizerKind::adam : OptimizerKind::sgd;
  cfg_.lr.start = r.f64();
  cfg_.lr.end = r.f64();
  cfg_.lr.horizon = r.i64();
  cfg_.beta1 = r.f64();
  cfg_.beta2 = r.f64();
  cfg_.eps = r.f64();
  t_ = r.i64();
  std::uint64_t n = r.u64();
  m_.assign(n, Vector());
  v_.assign(n, Vector());
  for (std::uint64_t i = 0; i < n; ++i) {
    m_[i] = r.vec();
    v_[i] = r.vec();
  }
  auto params = views();
  if (params.size() != m_.size())
    throw DependencyError("optimizer state does not match attached networks");
  for (size_t i = 0; i < params.size(); ++i)
    if (m_[i].size() != params[i].size)
      throw DependencyError("optimizer tensor shape mismatch at index " + std::to_string(i));
}

}  // namespace inquest::nn
