#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "evolab/rng.hpp"

namespace evolab {

enum class Activation { Identity, Relu, Sigmoid };

std::string_view activation_name(Activation a);
Activation activation_from_name(std::string_view name);

// Per-layer parameter gradients, shaped like the owning Mlp.
struct Gradients {
  std::vector<std::vector<double>> dw;  // row-major out x in, per layer
  std::vector<std::vector<double>> db;  // per layer
};

// Everything backward() needs from a forward pass.
struct ActivationRecord {
  std::vector<double> input;
  std::vector<std::vector<double>> pre;   // z = W a_prev + b, per layer
  std::vector<std::vector<double>> post;  // activation(z), per layer
};

// Fully-connected net. Layer l maps layer_sizes[l] -> layer_sizes[l+1]
// via weights w_[l] (row-major, out x in) and biases b_[l], then applies
// activations[l]. Parameters flatten layer by layer, weights before biases.
class Mlp {
 public:
  Mlp(std::vector<int> layer_sizes, std::vector<Activation> activations);

  // All weights and biases drawn i.i.d. from U(-scale, scale).
  void init_uniform(double scale, Rng& rng);

  // Per-layer U(-scale/sqrt(fan_in), +scale/sqrt(fan_in)) for weights and
  // biases, the torch.nn.Linear default at scale 1.
  void init_fanin_uniform(double scale, Rng& rng);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  const std::vector<Activation>& activations() const { return acts_; }
  std::size_t num_layers() const { return acts_.size(); }
  std::size_t param_count() const { return param_count_; }

  std::vector<double> forward(const std::vector<double>& input) const;
  ActivationRecord forward_record(const std::vector<double>& input) const;

  // Backprop from dL/d(output) through the recorded pass.
  Gradients backward(const ActivationRecord& rec,
                     const std::vector<double>& dloss_doutput) const;

  Gradients zero_gradients() const;

  std::vector<double> to_flat() const;
  void set_from_flat(const std::vector<double>& flat);
  std::vector<double> flatten_gradients(const Gradients& g) const;

  // In-place vanilla SGD: p -= lr * dp.
  void sgd_step(const Gradients& g, double lr);

  std::vector<double>& weights(std::size_t layer) { return w_[layer]; }
  std::vector<double>& biases(std::size_t layer) { return b_[layer]; }
  const std::vector<double>& weights(std::size_t layer) const { return w_[layer]; }
  const std::vector<double>& biases(std::size_t layer) const { return b_[layer]; }

 private:
  std::vector<int> sizes_;
  std::vector<Activation> acts_;
  std::vector<std::vector<double>> w_;
  std::vector<std::vector<double>> b_;
  std::size_t param_count_ = 0;
};

struct AdamParams {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment estimates; t counts completed steps.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t t = 0;

  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected Adam update on a flat parameter vector.
void adam_step(std::vector<double>& params, const std::vector<double>& grad,
               AdamState& state, const AdamParams& hp);

}  // namespace evolab
