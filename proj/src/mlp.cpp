#include "evolab/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace evolab {

namespace {

double apply_activation(Activation a, double z) {
  switch (a) {
    case Activation::Identity: return z;
    case Activation::Relu: return z > 0.0 ? z : 0.0;
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
  }
  throw std::logic_error("unknown activation");
}

// Derivative in terms of pre-activation z and post-activation y.
double activation_grad(Activation a, double z, double y) {
  switch (a) {
    case Activation::Identity: return 1.0;
    case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::Sigmoid: return y * (1.0 - y);
  }
  throw std::logic_error("unknown activation");
}

}  // namespace

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Relu: return "relu";
    case Activation::Sigmoid: return "sigmoid";
  }
  throw std::logic_error("unknown activation");
}

Activation activation_from_name(std::string_view name) {
  if (name == "identity") return Activation::Identity;
  if (name == "relu") return Activation::Relu;
  if (name == "sigmoid") return Activation::Sigmoid;
  throw std::invalid_argument("unknown activation name: " + std::string(name));
}

Mlp::Mlp(std::vector<int> layer_sizes, std::vector<Activation> activations)
    : sizes_(std::move(layer_sizes)), acts_(std::move(activations)) {
  if (sizes_.size() < 2)
    throw std::invalid_argument("Mlp: need at least input and output layer");
  if (acts_.size() != sizes_.size() - 1)
    throw std::invalid_argument("Mlp: need one activation per layer transition");
  for (int s : sizes_)
    if (s <= 0) throw std::invalid_argument("Mlp: layer sizes must be positive");

  w_.resize(acts_.size());
  b_.resize(acts_.size());
  for (std::size_t l = 0; l < acts_.size(); ++l) {
    std::size_t in = static_cast<std::size_t>(sizes_[l]);
    std::size_t out = static_cast<std::size_t>(sizes_[l + 1]);
    w_[l].assign(out * in, 0.0);
    b_[l].assign(out, 0.0);
    param_count_ += out * in + out;
  }
}

void Mlp::init_uniform(double scale, Rng& rng) {
  for (std::size_t l = 0; l < w_.size(); ++l) {
    for (double& x : w_[l]) x = rng.uniform(-scale, scale);
    for (double& x : b_[l]) x = rng.uniform(-scale, scale);
  }
}

void Mlp::init_fanin_uniform(double scale, Rng& rng) {
  for (std::size_t l = 0; l < w_.size(); ++l) {
    double bound = scale / std::sqrt(static_cast<double>(sizes_[l]));
    for (double& x : w_[l]) x = rng.uniform(-bound, bound);
    for (double& x : b_[l]) x = rng.uniform(-bound, bound);
  }
}

std::vector<double> Mlp::forward(const std::vector<double>& input) const {
  if (input.size() != static_cast<std::size_t>(sizes_[0]))
    throw std::invalid_argument("Mlp::forward: input size mismatch");
  std::vector<double> a = input;
  std::vector<double> z;
  for (std::size_t l = 0; l < acts_.size(); ++l) {
    std::size_t in = static_cast<std::size_t>(sizes_[l]);
    std::size_t out = static_cast<std::size_t>(sizes_[l + 1]);
    z.assign(out, 0.0);
    for (std::size_t i = 0; i < out; ++i) {
      double s = b_[l][i];
      const double* row = &w_[l][i * in];
      for (std::size_t j = 0; j < in; ++j) s += row[j] * a[j];
      z[i] = apply_activation(acts_[l], s);
    }
    a.swap(z);
  }
  return a;
}

ActivationRecord Mlp::forward_record(const std::vector<double>& input) const {
  if (input.size() != static_cast<std::size_t>(sizes_[0]))
    throw std::invalid_argument("Mlp::forward_record: input size mismatch");
  ActivationRecord rec;
  rec.input = input;
  rec.pre.resize(acts_.size());
  rec.post.resize(acts_.size());
  const std::vector<double>* a = &rec.input;
  for (std::size_t l = 0; l < acts_.size(); ++l) {
    std::size_t in = static_cast<std::size_t>(sizes_[l]);
    std::size_t out = static_cast<std::size_t>(sizes_[l + 1]);
    rec.pre[l].assign(out, 0.0);
    rec.post[l].assign(out, 0.0);
    for (std::size_t i = 0; i < out; ++i) {
      double s = b_[l][i];
      const double* row = &w_[l][i * in];
      for (std::size_t j = 0; j < in; ++j) s += row[j] * (*a)[j];
      rec.pre[l][i] = s;
      rec.post[l][i] = apply_activation(acts_[l], s);
    }
    a = &rec.post[l];
  }
  return rec;
}

Gradients Mlp::backward(const ActivationRecord& rec,
                        const std::vector<double>& dloss_doutput) const {
  std::size_t L = acts_.size();
  bool shape_ok = rec.post.size() == L && rec.pre.size() == L &&
                  rec.input.size() == static_cast<std::size_t>(sizes_.front());
  for (std::size_t l = 0; shape_ok && l < L; ++l) {
    shape_ok = rec.pre[l].size() == static_cast<std::size_t>(sizes_[l + 1]) &&
               rec.post[l].size() == static_cast<std::size_t>(sizes_[l + 1]);
  }
  if (!shape_ok)
    throw std::invalid_argument("Mlp::backward: record does not match net");
  if (dloss_doutput.size() != static_cast<std::size_t>(sizes_.back()))
    throw std::invalid_argument("Mlp::backward: output gradient size mismatch");

  Gradients g = zero_gradients();
  std::vector<double> delta = dloss_doutput;  // dL/d(post) of current layer
  for (std::size_t l = L; l-- > 0;) {
    std::size_t in = static_cast<std::size_t>(sizes_[l]);
    std::size_t out = static_cast<std::size_t>(sizes_[l + 1]);
    const std::vector<double>& prev = l == 0 ? rec.input : rec.post[l - 1];
    // Through the activation: dL/dz = dL/d(post) * act'(z).
    for (std::size_t i = 0; i < out; ++i)
      delta[i] *= activation_grad(acts_[l], rec.pre[l][i], rec.post[l][i]);
    for (std::size_t i = 0; i < out; ++i) {
      double* drow = &g.dw[l][i * in];
      for (std::size_t j = 0; j < in; ++j) drow[j] = delta[i] * prev[j];
      g.db[l][i] = delta[i];
    }
    if (l == 0) break;
    std::vector<double> next(in, 0.0);
    for (std::size_t i = 0; i < out; ++i) {
      const double* row = &w_[l][i * in];
      for (std::size_t j = 0; j < in; ++j) next[j] += row[j] * delta[i];
    }
    delta.swap(next);
  }
  return g;
}

Gradients Mlp::zero_gradients() const {
  Gradients g;
  g.dw.resize(w_.size());
  g.db.resize(b_.size());
  for (std::size_t l = 0; l < w_.size(); ++l) {
    g.dw[l].assign(w_[l].size(), 0.0);
    g.db[l].assign(b_[l].size(), 0.0);
  }
  return g;
}

std::vector<double> Mlp::to_flat() const {
  std::vector<double> flat;
  flat.reserve(param_count_);
  for (std::size_t l = 0; l < w_.size(); ++l) {
    flat.insert(flat.end(), w_[l].begin(), w_[l].end());
    flat.insert(flat.end(), b_[l].begin(), b_[l].end());
  }
  return flat;
}

void Mlp::set_from_flat(const std::vector<double>& flat) {
  if (flat.size() != param_count_)
    throw std::invalid_argument("Mlp::set_from_flat: expected " +
                                std::to_string(param_count_) + " params, got " +
                                std::to_string(flat.size()));
  std::size_t k = 0;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    for (double& x : w_[l]) x = flat[k++];
    for (double& x : b_[l]) x = flat[k++];
  }
}

std::vector<double> Mlp::flatten_gradients(const Gradients& g) const {
  std::vector<double> flat;
  flat.reserve(param_count_);
  for (std::size_t l = 0; l < w_.size(); ++l) {
    flat.insert(flat.end(), g.dw[l].begin(), g.dw[l].end());
    flat.insert(flat.end(), g.db[l].begin(), g.db[l].end());
  }
  return flat;
}

void Mlp::sgd_step(const Gradients& g, double lr) {
  for (std::size_t l = 0; l < w_.size(); ++l) {
    for (std::size_t i = 0; i < w_[l].size(); ++i) w_[l][i] -= lr * g.dw[l][i];
    for (std::size_t i = 0; i < b_[l].size(); ++i) b_[l][i] -= lr * g.db[l][i];
  }
}

void adam_step(std::vector<double>& params, const std::vector<double>& grad,
               AdamState& state, const AdamParams& hp) {
  if (params.size() != grad.size() || params.size() != state.m.size())
    throw std::invalid_argument("adam_step: size mismatch");
  state.t += 1;
  double bc1 = 1.0 - std::pow(hp.beta1, static_cast<double>(state.t));
  double bc2 = 1.0 - std::pow(hp.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = hp.beta1 * state.m[i] + (1.0 - hp.beta1) * grad[i];
    state.v[i] = hp.beta2 * state.v[i] + (1.0 - hp.beta2) * grad[i] * grad[i];
    double mhat = state.m[i] / bc1;
    double vhat = state.v[i] / bc2;
    params[i] -= hp.lr * mhat / (std::sqrt(vhat) + hp.eps);
  }
}

}  // namespace evolab
