#include "evolab/cartpole.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evolab {

namespace {

// y = (x, x_dot, theta, theta_dot); returns dy/dt under constant force.
// Standard frictionless cart-pole equations (pole as a uniform rod about
// its center of mass, hence the 4/3 factor).
std::array<double, 4> derivatives(const std::array<double, 4>& y, double force,
                                  const CartPoleParams& p) {
  double theta = y[2], theta_dot = y[3];
  double total_mass = p.cart_mass + p.pole_mass;
  double sin_t = std::sin(theta), cos_t = std::cos(theta);
  double temp =
      (force + p.pole_mass * p.half_length * theta_dot * theta_dot * sin_t) / total_mass;
  double theta_acc =
      (p.gravity * sin_t - cos_t * temp) /
      (p.half_length * (4.0 / 3.0 - p.pole_mass * cos_t * cos_t / total_mass));
  double x_acc = temp - p.pole_mass * p.half_length * theta_acc * cos_t / total_mass;
  return {y[1], x_acc, y[3], theta_acc};
}

}  // namespace

std::array<double, 4> CartPoleEnv::observation() const {
  return {s_.cart_position, s_.cart_velocity, s_.pole_angle, s_.pole_angular_velocity};
}

std::array<double, 4> CartPoleEnv::reset(Rng& rng, double noise_scale) {
  if (noise_scale < 0.0)
    throw std::invalid_argument("CartPoleEnv::reset: noise_scale must be >= 0");
  s_.cart_position = rng.uniform(-noise_scale, noise_scale);
  s_.cart_velocity = rng.uniform(-noise_scale, noise_scale);
  s_.pole_angle = rng.uniform(-noise_scale, noise_scale);
  s_.pole_angular_velocity = rng.uniform(-noise_scale, noise_scale);
  s_.step_count = 0;
  terminated_ = false;
  return observation();
}

void CartPoleEnv::set_state(const CartPoleState& s) {
  s_ = s;
  terminated_ = false;
}

StepResult CartPoleEnv::step(double action) {
  if (terminated_)
    throw std::logic_error("CartPoleEnv::step: episode already terminated; reset first");

  double clamped = std::clamp(action, p_.action_low, p_.action_high);
  double force = clamped * p_.force_gain;

  // RK4 over one control tick. The tick doubles as the integration step:
  // at dt = 0.02 the force-free energy drift is ~1e-6 over 1000 steps.
  std::array<double, 4> y = {s_.cart_position, s_.cart_velocity, s_.pole_angle,
                             s_.pole_angular_velocity};
  auto k1 = derivatives(y, force, p_);
  std::array<double, 4> y2, y3, y4;
  for (int i = 0; i < 4; ++i) y2[i] = y[i] + 0.5 * p_.dt * k1[i];
  auto k2 = derivatives(y2, force, p_);
  for (int i = 0; i < 4; ++i) y3[i] = y[i] + 0.5 * p_.dt * k2[i];
  auto k3 = derivatives(y3, force, p_);
  for (int i = 0; i < 4; ++i) y4[i] = y[i] + p_.dt * k3[i];
  auto k4 = derivatives(y4, force, p_);
  for (int i = 0; i < 4; ++i)
    y[i] += p_.dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

  s_.cart_position = y[0];
  s_.cart_velocity = y[1];
  s_.pole_angle = y[2];
  s_.pole_angular_velocity = y[3];
  s_.step_count += 1;

  bool angle_ok = std::abs(s_.pole_angle) < p_.angle_threshold;
  StepResult result;
  result.observation = observation();
  result.reward = angle_ok ? 1.0 : 0.0;
  result.terminated = !angle_ok || s_.step_count >= p_.max_steps;
  terminated_ = result.terminated;
  return result;
}

double CartPoleEnv::mechanical_energy(const CartPoleState& s, const CartPoleParams& p) {
  double m = p.pole_mass, M = p.cart_mass + p.pole_mass, l = p.half_length;
  double v = s.cart_velocity, w = s.pole_angular_velocity, th = s.pole_angle;
  // Cart + pole translational KE, pole rotational KE about its CM (uniform
  // rod: I = m(2l)^2/12), cross term from the CM velocity, and PE of the CM.
  double kinetic = 0.5 * M * v * v + m * l * w * v * std::cos(th) +
                   (2.0 / 3.0) * m * l * l * w * w;
  double potential = m * p.gravity * l * std::cos(th);
  return kinetic + potential;
}

}  // namespace evolab
