#include "inquest/net.hpp"

#include "inquest/serialize.hpp"

#include <cmath>
#include <random>

namespace inquest::nn {

std::vector<LayerSpec> mlp_spec(int in, const std::vector<int>& hidden, int out,
                                bool batch_norm, Scalar slope) {
  std::vector<LayerSpec> spec;
  int prev = in;
  for (int h : hidden) {
    spec.push_back({prev, h, batch_norm, Activation::leaky_relu, slope});
    prev = h;
  }
  spec.push_back({prev, out, false, Activation::identity, slope});
  return spec;
}

Network::Network(std::vector<LayerSpec> spec, std::uint64_t seed) : spec_(std::move(spec)) {
  if (spec_.empty()) throw DimensionError("network needs at least one layer");
  for (size_t i = 1; i < spec_.size(); ++i)
    if (spec_[i].in != spec_[i - 1].out)
      throw DimensionError("layer dimensions do not chain: layer " + std::to_string(i));

  std::mt19937_64 rng(seed);
  layers_.resize(spec_.size());
  for (size_t i = 0; i < spec_.size(); ++i) {
    const LayerSpec& s = spec_[i];
    Layer& l = layers_[i];
    Scalar limit = std::sqrt(6.0 / static_cast<Scalar>(s.in + s.out));
    std::uniform_real_distribution<Scalar> dist(-limit, limit);
    l.w.resize(s.in, s.out);
    for (Eigen::Index r = 0; r < l.w.rows(); ++r)
      for (Eigen::Index c = 0; c < l.w.cols(); ++c) l.w(r, c) = dist(rng);
    l.b = Vector::Zero(s.out);
    l.gw = Matrix::Zero(s.in, s.out);
    l.gb = Vector::Zero(s.out);
    if (s.batch_norm) {
      l.bn_scale = Vector::Ones(s.out);
      l.bn_shift = Vector::Zero(s.out);
      l.bn_run_mean = Vector::Zero(s.out);
      l.bn_run_var = Vector::Ones(s.out);
      l.g_scale = Vector::Zero(s.out);
      l.g_shift = Vector::Zero(s.out);
    }
  }
}

int Network::input_dim() const { return spec_.empty() ? 0 : spec_.front().in; }
int Network::output_dim() const { return spec_.empty() ? 0 : spec_.back().out; }

Matrix Network::forward(const Matrix& x) {
  if (x.cols() != input_dim())
    throw DimensionError("forward: expected " + std::to_string(input_dim()) + " columns, got " +
                         std::to_string(x.cols()));
  Matrix cur = x;
  for (size_t i = 0; i < layers_.size(); ++i) {
    const LayerSpec& s = spec_[i];
    Layer& l = layers_[i];
    l.in = cur;
    l.pre_bn = cur * l.w;
    l.pre_bn.rowwise() += l.b.transpose();
    Matrix z;
    if (s.batch_norm) {
      Vector inv_std;
      if (train_) {
        l.mu = l.pre_bn.colwise().mean().transpose();
        Matrix centered = l.pre_bn.rowwise() - l.mu.transpose();
        l.var = centered.array().square().matrix().colwise().mean().transpose();
        inv_std = (l.var.array() + kBnEps).rsqrt().matrix();
        l.xhat = (centered.array().rowwise() * inv_std.transpose().array()).matrix();
        l.bn_run_mean = (1.0 - kBnMomentum) * l.bn_run_mean + kBnMomentum * l.mu;
        l.bn_run_var = (1.0 - kBnMomentum) * l.bn_run_var + kBnMomentum * l.var;
      } else {
        inv_std = (l.bn_run_var.array() + kBnEps).rsqrt().matrix();
        Matrix centered = l.pre_bn.rowwise() - l.bn_run_mean.transpose();
        l.xhat = (centered.array().rowwise() * inv_std.transpose().array()).matrix();
      }
      z = (l.xhat.array().rowwise() * l.bn_scale.transpose().array()).matrix();
      z.rowwise() += l.bn_shift.transpose();
    } else {
      z = l.pre_bn;
    }
    l.pre_act = z;
    if (s.activation == Activation::leaky_relu) {
      cur = z.unaryExpr([slope = s.leaky_slope](Scalar v) { return v > 0 ? v : slope * v; });
    } else {
      cur = z;
    }
  }
  cached_ = true;
  cache_was_train_ = train_;
  return cur;
}

Matrix Network::backward(const Matrix& grad_out) {
  if (!cached_) throw StateError("backward called without a preceding forward");
  if (grad_out.cols() != output_dim() || grad_out.rows() != layers_.back().pre_act.rows())
    throw DimensionError("backward: upstream gradient shape mismatch");

  Matrix grad = grad_out;
  for (size_t idx = layers_.size(); idx-- > 0;) {
    const LayerSpec& s = spec_[idx];
    Layer& l = layers_[idx];

    if (s.activation == Activation::leaky_relu) {
      Matrix mask = l.pre_act.unaryExpr(
          [slope = s.leaky_slope](Scalar v) { return v > 0 ? 1.0 : slope; });
      grad = (grad.array() * mask.array()).matrix();
    }

    Matrix d_pre_bn;
    if (s.batch_norm) {
      l.g_scale = (grad.array() * l.xhat.array()).matrix().colwise().sum().transpose();
      l.g_shift = grad.colwise().sum().transpose();
      Matrix dxhat = (grad.array().rowwise() * l.bn_scale.transpose().array()).matrix();
      if (cache_was_train_) {
        const Scalar n = static_cast<Scalar>(grad.rows());
        Vector inv_std = (l.var.array() + kBnEps).rsqrt().matrix();
        Matrix centered = l.pre_bn.rowwise() - l.mu.transpose();
        Vector sum_dxhat_centered =
            (dxhat.array() * centered.array()).matrix().colwise().sum().transpose();
        Vector dvar =
            (sum_dxhat_centered.array() * (-0.5) * (l.var.array() + kBnEps).pow(-1.5)).matrix();
        Vector dmu =
            -(dxhat.array().rowwise() * inv_std.transpose().array()).matrix().colwise().sum().transpose();
        d_pre_bn = (dxhat.array().rowwise() * inv_std.transpose().array()).matrix() +
                   (centered.array().rowwise() * ((2.0 / n) * dvar.transpose().array())).matrix();
        d_pre_bn.rowwise() += (dmu / n).transpose();
      } else {
        Vector inv_std = (l.bn_run_var.array() + kBnEps).rsqrt().matrix();
        d_pre_bn = (dxhat.array().rowwise() * inv_std.transpose().array()).matrix();
      }
    } else {
      d_pre_bn = grad;
    }

    l.gw = l.in.transpose() * d_pre_bn;
    l.gb = d_pre_bn.colwise().sum().transpose();
    grad = d_pre_bn * l.w.transpose();
  }
  return grad;
}

void Network::zero_grad() {
  for (Layer& l : layers_) {
    l.gw.setZero();
    l.gb.setZero();
    if (l.g_scale.size()) l.g_scale.setZero();
    if (l.g_shift.size()) l.g_shift.setZero();
  }
}

std::vector<Network::ParamView> Network::params() {
  std::vector<ParamView> out;
  for (size_t i = 0; i < layers_.size(); ++i) {
    Layer& l = layers_[i];
    out.push_back({l.w.data(), l.gw.data(), l.w.size()});
    out.push_back({l.b.data(), l.gb.data(), l.b.size()});
    if (spec_[i].batch_norm) {
      out.push_back({l.bn_scale.data(), l.g_scale.data(), l.bn_scale.size()});
      out.push_back({l.bn_shift.data(), l.g_shift.data(), l.bn_shift.size()});
    }
  }
  return out;
}

std::vector<std::int8_t> Network::kink_signature() const {
  std::vector<std::int8_t> sig;
  if (!cached_) return sig;
  for (size_t i = 0; i < layers_.size(); ++i) {
    if (spec_[i].activation != Activation::leaky_relu) continue;
    const Matrix& z = layers_[i].pre_act;
    for (Eigen::Index r = 0; r < z.rows(); ++r)
      for (Eigen::Index c = 0; c < z.cols(); ++c) {
        Scalar v = z(r, c);
        sig.push_back(v > 0 ? 1 : (v < 0 ? -1 : 0));
      }
  }
  return sig;
}

bool same_architecture(const Network& a, const Network& b) { return a.spec_ == b.spec_; }

void polyak_update(Network& target, const Network& main, Scalar tau) {
  if (!same_architecture(target, main))
    throw StateError("polyak_update: architecture mismatch");
  for (size_t i = 0; i < target.layers_.size(); ++i) {
    Network::Layer& t = target.layers_[i];
    const Network::Layer& m = main.layers_[i];
    t.w = tau * m.w + (1.0 - tau) * t.w;
    t.b = tau * m.b + (1.0 - tau) * t.b;
    if (target.spec_[i].batch_norm) {
      t.bn_scale = tau * m.bn_scale + (1.0 - tau) * t.bn_scale;
      t.bn_shift = tau * m.bn_shift + (1.0 - tau) * t.bn_shift;
      t.bn_run_mean = tau * m.bn_run_mean + (1.0 - tau) * t.bn_run_mean;
      t.bn_run_var = tau * m.bn_run_var + (1.0 - tau) * t.bn_run_var;
    }
  }
}

std::string Network::serialize() const {
  io::Writer w;
  w.u32(static_cast<std::uint32_t>(spec_.size()));
  for (const LayerSpec& s : spec_) {
    w.u32(static_cast<std::uint32_t>(s.in));
    w.u32(static_cast<std::uint32_t>(s.out));
    w.u8(s.batch_norm ? 1 : 0);
    w.u8(s.activation == Activation::leaky_relu ? 1 : 0);
    w.f64(s.leaky_slope);
  }
  for (size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    w.mat(l.w);
    w.vec(l.b);
    if (spec_[i].batch_norm) {
      w.vec(l.bn_scale);
      w.vec(l.bn_shift);
      w.vec(l.bn_run_mean);
      w.vec(l.bn_run_var);
    }
  }
  return w.take();
}

Network Network::deserialize(std::string_view bytes) {
  io::Reader r(bytes);
  std::uint32_t n = r.u32();
  std::vector<LayerSpec> spec(n);
  for (auto& s : spec) {
    s.in = static_cast<int>(r.u32());
    s.out = static_cast<int>(r.u32());
    s.batch_norm = r.u8() != 0;
    s.activation = r.u8() ? Activation::leaky_relu : Activation::identity;
    s.leaky_slope = r.f64();
  }
  Network net(spec, 0);
  for (size_t i = 0; i < net.layers_.size(); ++i) {
    Layer& l = net.layers_[i];
    l.w = r.mat();
    l.b = r.vec();
    if (spec[i].batch_norm) {
      l.bn_scale = r.vec();
      l.bn_shift = r.vec();
      l.bn_run_mean = r.vec();
      l.bn_run_var = r.vec();
    }
  }
  return net;
}

bool Network::allclose(const Network& other, Scalar tol) const {
  if (!same_architecture(*this, other)) return false;
  for (size_t i = 0; i < layers_.size(); ++i) {
    const Layer& a = layers_[i];
    const Layer& b = other.layers_[i];
    if ((a.w - b.w).cwiseAbs().maxCoeff() > tol) return false;
    if ((a.b - b.b).cwiseAbs().maxCoeff() > tol) return false;
    if (spec_[i].batch_norm) {
      if ((a.bn_scale - b.bn_scale).cwiseAbs().maxCoeff() > tol) return false;
      if ((a.bn_shift - b.bn_shift).cwiseAbs().maxCoeff() > tol) return false;
      if ((a.bn_run_mean - b.bn_run_mean).cwiseAbs().maxCoeff() > tol) return false;
      if ((a.bn_run_var - b.bn_run_var).cwiseAbs().maxCoeff() > tol) return false;
    }
  }
  return true;
}

}  // namespace inquest::nn
