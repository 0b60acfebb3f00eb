#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "evolab/mlp.hpp"
#include "evolab/rng.hpp"

using namespace evolab;

namespace {

double weighted_output(const Mlp& net, const std::vector<double>& input,
                       const std::vector<double>& coeff) {
  std::vector<double> out = net.forward(input);
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += coeff[i] * out[i];
  return s;
}

// Central finite differences of coeff . net(input) over every parameter.
std::vector<double> fd_gradient(Mlp net, const std::vector<double>& input,
                                const std::vector<double>& coeff, double h) {
  std::vector<double> flat = net.to_flat();
  std::vector<double> grad(flat.size());
  for (std::size_t k = 0; k < flat.size(); ++k) {
    double saved = flat[k];
    flat[k] = saved + h;
    net.set_from_flat(flat);
    double up = weighted_output(net, input, coeff);
    flat[k] = saved - h;
    net.set_from_flat(flat);
    double down = weighted_output(net, input, coeff);
    flat[k] = saved;
    grad[k] = (up - down) / (2.0 * h);
  }
  net.set_from_flat(flat);
  return grad;
}

Activation pick_activation(Rng& rng) {
  switch (rng.uniform_index(3)) {
    case 0: return Activation::Identity;
    case 1: return Activation::Relu;
    default: return Activation::Sigmoid;
  }
}

}  // namespace

TEST_CASE("activation names round-trip") {
  for (Activation a : {Activation::Identity, Activation::Relu, Activation::Sigmoid}) {
    CHECK(activation_from_name(activation_name(a)) == a);
  }
  CHECK_THROWS_AS(activation_from_name("tanh"), std::invalid_argument);
}

TEST_CASE("constructor validates its shape") {
  CHECK_THROWS_AS(Mlp({4}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Mlp({4, 2}, {Activation::Relu, Activation::Relu}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Mlp({4, 0, 1}, {Activation::Relu, Activation::Identity}),
                  std::invalid_argument);
}

TEST_CASE("param_count and flat layout are layer-major, weights before biases") {
  Mlp net({2, 3, 1}, {Activation::Relu, Activation::Identity});
  CHECK(net.param_count() == 2 * 3 + 3 + 3 * 1 + 1);

  std::vector<double> flat(net.param_count());
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = static_cast<double>(i);
  net.set_from_flat(flat);
  CHECK(net.weights(0) == std::vector<double>{0, 1, 2, 3, 4, 5});
  CHECK(net.biases(0) == std::vector<double>{6, 7, 8});
  CHECK(net.weights(1) == std::vector<double>{9, 10, 11});
  CHECK(net.biases(1) == std::vector<double>{12});
  CHECK(net.to_flat() == flat);

  CHECK_THROWS_AS(net.set_from_flat(std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("forward matches hand-computed linear algebra") {
  Mlp net({2, 2, 1}, {Activation::Relu, Activation::Identity});
  // w0 rows: [1, -1], [0.5, 2]; b0: [0.1, -3]; w1: [2, 1]; b1: [0.25].
  net.set_from_flat({1.0, -1.0, 0.5, 2.0, 0.1, -3.0, 2.0, 1.0, 0.25});
  // z0 = [1*3 - 1*1 + 0.1, 0.5*3 + 2*1 - 3] = [2.1, 0.5]; relu keeps both.
  // out = 2*2.1 + 1*0.5 + 0.25 = 4.95.
  std::vector<double> out = net.forward({3.0, 1.0});
  REQUIRE(out.size() == 1);
  CHECK(out[0] == doctest::Approx(4.95).epsilon(1e-12));

  // Negative pre-activation is clipped by the relu.
  net.set_from_flat({1.0, -1.0, 0.5, 2.0, 0.1, -10.0, 2.0, 1.0, 0.25});
  out = net.forward({3.0, 1.0});
  CHECK(out[0] == doctest::Approx(2.0 * 2.1 + 0.25).epsilon(1e-12));

  CHECK_THROWS_AS(net.forward({1.0}), std::invalid_argument);
}

TEST_CASE("sigmoid activation is 1/(1+exp(-z))") {
  Mlp net({1, 1}, {Activation::Sigmoid});
  net.set_from_flat({2.0, -1.0});  // z = 2x - 1
  double out = net.forward({0.75})[0];
  CHECK(out == doctest::Approx(1.0 / (1.0 + std::exp(-0.5))).epsilon(1e-14));
}

TEST_CASE("forward_record stores consistent pre/post activations") {
  Rng rng(3);
  Mlp net({3, 4, 2}, {Activation::Sigmoid, Activation::Identity});
  net.init_uniform(0.7, rng);
  std::vector<double> input{0.2, -0.4, 1.1};
  ActivationRecord rec = net.forward_record(input);
  CHECK(rec.input == input);
  REQUIRE(rec.pre.size() == 2);
  REQUIRE(rec.post.size() == 2);
  for (std::size_t i = 0; i < rec.pre[0].size(); ++i) {
    CHECK(rec.post[0][i] ==
          doctest::Approx(1.0 / (1.0 + std::exp(-rec.pre[0][i]))).epsilon(1e-14));
  }
  CHECK(rec.post[1] == net.forward(input));
}

TEST_CASE("backward matches central finite differences on random nets") {
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    int depth = 1 + static_cast<int>(rng.uniform_index(3));
    std::vector<int> sizes{1 + static_cast<int>(rng.uniform_index(6))};
    std::vector<Activation> acts;
    for (int l = 0; l < depth; ++l) {
      sizes.push_back(1 + static_cast<int>(rng.uniform_index(6)));
      acts.push_back(pick_activation(rng));
    }
    Mlp net(sizes, acts);
    net.init_uniform(0.9, rng);

    std::vector<double> input(sizes.front());
    for (double& x : input) x = rng.uniform(-1.0, 1.0);
    std::vector<double> coeff(sizes.back());
    for (double& c : coeff) c = rng.uniform(-1.0, 1.0);

    ActivationRecord rec = net.forward_record(input);
    Gradients g = net.backward(rec, coeff);
    std::vector<double> flat_bp = net.flatten_gradients(g);
    std::vector<double> flat_fd = fd_gradient(net, input, coeff, 1e-5);

    REQUIRE(flat_bp.size() == flat_fd.size());
    for (std::size_t k = 0; k < flat_bp.size(); ++k) {
      double rel = std::abs(flat_bp[k] - flat_fd[k]) /
                   std::max(std::abs(flat_fd[k]), 1e-6);
      worst = std::max(worst, rel);
    }
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("backward validates record and gradient shapes") {
  Mlp net({2, 2, 1}, {Activation::Relu, Activation::Identity});
  Mlp other({2, 3, 1}, {Activation::Relu, Activation::Identity});
  ActivationRecord rec = other.forward_record({0.0, 0.0});
  CHECK_THROWS_AS(net.backward(rec, {1.0}), std::invalid_argument);
  ActivationRecord ok = net.forward_record({0.0, 0.0});
  CHECK_THROWS_AS(net.backward(ok, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("zero_gradients matches the net's shape") {
  Mlp net({3, 2, 2}, {Activation::Relu, Activation::Identity});
  Gradients g = net.zero_gradients();
  REQUIRE(g.dw.size() == 2);
  REQUIRE(g.db.size() == 2);
  CHECK(g.dw[0].size() == 6);
  CHECK(g.db[0].size() == 2);
  CHECK(g.dw[1].size() == 4);
  CHECK(g.db[1].size() == 2);
  for (const auto& layer : g.dw) {
    for (double x : layer) CHECK(x == 0.0);
  }
}

TEST_CASE("sgd_step applies p -= lr * dp exactly") {
  Mlp net({1, 1}, {Activation::Identity});
  net.set_from_flat({1.0, 2.0});
  Gradients g = net.zero_gradients();
  g.dw[0][0] = 0.5;
  g.db[0][0] = -4.0;
  net.sgd_step(g, 0.1);
  CHECK(net.to_flat() == std::vector<double>{1.0 - 0.05, 2.0 + 0.4});
}

TEST_CASE("init_uniform draws every parameter inside [-scale, scale]") {
  Rng rng(5);
  Mlp net({8, 16, 4}, {Activation::Relu, Activation::Identity});
  net.init_uniform(0.3, rng);
  double lo = 0.0, hi = 0.0;
  for (double x : net.to_flat()) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(lo >= -0.3);
  CHECK(hi < 0.3);
  // With 200+ draws the extremes should reach most of the range.
  CHECK(lo < -0.2);
  CHECK(hi > 0.2);
}

TEST_CASE("init_fanin_uniform scales each layer by 1/sqrt(fan_in)") {
  Rng rng(6);
  Mlp net({4, 64, 1}, {Activation::Relu, Activation::Identity});
  net.init_fanin_uniform(2.0, rng);
  double bound0 = 2.0 / std::sqrt(4.0);
  double bound1 = 2.0 / std::sqrt(64.0);

  double max0 = 0.0;
  for (double x : net.weights(0)) max0 = std::max(max0, std::abs(x));
  for (double x : net.biases(0)) max0 = std::max(max0, std::abs(x));
  double max1 = 0.0;
  for (double x : net.weights(1)) max1 = std::max(max1, std::abs(x));
  for (double x : net.biases(1)) max1 = std::max(max1, std::abs(x));

  CHECK(max0 <= bound0);
  CHECK(max1 <= bound1);
  // The first layer really uses its own, larger bound.
  CHECK(max0 > bound1);
  CHECK(max0 > 0.8 * bound0);
  CHECK(max1 > 0.8 * bound1);
}

TEST_CASE("adam_step matches a direct reimplementation") {
  AdamParams hp;
  hp.lr = 0.05;

  std::vector<double> p{0.0, 1.0, -2.0};
  AdamState state(p.size());

  std::vector<double> q = p;
  std::vector<double> m(p.size(), 0.0), v(p.size(), 0.0);

  Rng rng(13);
  for (int t = 1; t <= 5; ++t) {
    std::vector<double> g(p.size());
    for (double& x : g) x = rng.uniform(-1.0, 1.0);
    adam_step(p, g, state, hp);

    for (std::size_t i = 0; i < q.size(); ++i) {
      m[i] = hp.beta1 * m[i] + (1.0 - hp.beta1) * g[i];
      v[i] = hp.beta2 * v[i] + (1.0 - hp.beta2) * g[i] * g[i];
      double mhat = m[i] / (1.0 - std::pow(hp.beta1, t));
      double vhat = v[i] / (1.0 - std::pow(hp.beta2, t));
      q[i] -= hp.lr * mhat / (std::sqrt(vhat) + hp.eps);
    }
    CHECK(state.t == t);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(p[i] == doctest::Approx(q[i]).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(adam_step(p, std::vector<double>(2), state, hp),
                  std::invalid_argument);
}

TEST_CASE("adam first step moves by lr against the gradient sign") {
  AdamParams hp;  // defaults: lr 1e-3
  std::vector<double> p{0.0};
  AdamState state(1);
  adam_step(p, {1.0}, state, hp);
  CHECK(p[0] == doctest::Approx(-hp.lr).epsilon(1e-6));
}
