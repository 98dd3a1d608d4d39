#pragma once

#include "inquest/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace inquest::nn {

enum class Activation { identity, leaky_relu };

struct LayerSpec {
  int in = 0;
  int out = 0;
  bool batch_norm = false;
  Activation activation = Activation::identity;
  Scalar leaky_slope = 0.01;

  bool operator==(const LayerSpec&) const = default;
};

// in -> hidden... -> out; batch norm + leaky relu on every hidden layer,
// plain linear output.
std::vector<LayerSpec> mlp_spec(int in, const std::vector<int>& hidden, int out,
                                bool batch_norm = true, Scalar slope = 0.01);

// Small dense feed-forward network with explicit forward/backward. Rows of
// the input matrix are samples. In train mode batch norm uses batch
// statistics and refreshes the running ones; in eval mode it uses running
// statistics only, so forward is deterministic.
class Network {
 public:
  Network() = default;
  Network(std::vector<LayerSpec> spec, std::uint64_t seed);

  Matrix forward(const Matrix& x);
  // Fills parameter gradients and returns the gradient wrt the input.
  // StateError when no forward pass is cached.
  Matrix backward(const Matrix& grad_out);
  void zero_grad();

  void set_train(bool train) { train_ = train; }
  bool training() const { return train_; }

  int input_dim() const;
  int output_dim() const;
  const std::vector<LayerSpec>& spec() const { return spec_; }

  struct ParamView {
    Scalar* value;
    Scalar* grad;
    Eigen::Index size;
  };
  // Trainable tensors in a fixed order (per layer: W, b, bn scale, bn shift).
  std::vector<ParamView> params();

  // Sign pattern of every leaky-relu pre-activation from the last forward;
  // -1/0/+1 entries. Used by the gradient checker to detect kink crossings.
  std::vector<std::int8_t> kink_signature() const;

  std::string serialize() const;
  static Network deserialize(std::string_view bytes);
  bool allclose(const Network& other, Scalar tol) const;

  friend void polyak_update(Network& target, const Network& main, Scalar tau);
  friend bool same_architecture(const Network& a, const Network& b);

 private:
  struct Layer {
    Matrix w;  // in x out
    Vector b;
    Vector bn_scale, bn_shift, bn_run_mean, bn_run_var;
    // gradients
    Matrix gw;
    Vector gb, g_scale, g_shift;
    // forward cache
    Matrix in, pre_bn, xhat, pre_act;
    Vector mu, var;  // batch statistics used (train mode)
  };

  static constexpr Scalar kBnEps = 1e-5;
  static constexpr Scalar kBnMomentum = 0.1;

  std::vector<LayerSpec> spec_;
  std::vector<Layer> layers_;
  bool train_ = false;
  bool cached_ = false;
  bool cache_was_train_ = false;
};

// target <- tau * main + (1 - tau) * target, over all parameters and batch
// norm running statistics. StateError on architecture mismatch.
void polyak_update(Network& target, const Network& main, Scalar tau);
bool same_architecture(const Network& a, const Network& b);

}  // namespace inquest::nn
