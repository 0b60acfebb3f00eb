#pragma once

#include <array>

#include "evolab/rng.hpp"

namespace evolab {

// Frictionless cart-pole constants (Barto et al. lineage). The policy's
// scalar action is clamped to [action_low, action_high] and scaled by
// force_gain to produce the applied force, playing the role of an actuator
// gear ratio.
struct CartPoleParams {
  double cart_mass = 1.0;       // kg
  double pole_mass = 0.1;       // kg
  double half_length = 0.5;     // m, pivot to pole center of mass
  double gravity = 9.8;         // m/s^2
  double dt = 0.02;             // s, control tick
  double force_gain = 10.0;     // N per action unit
  double action_low = -3.0;
  double action_high = 3.0;
  double angle_threshold = 0.2;  // rad
  int max_steps = 1000;
  double reset_noise = 0.01;
};

struct CartPoleState {
  double cart_position = 0.0;
  double cart_velocity = 0.0;
  double pole_angle = 0.0;
  double pole_angular_velocity = 0.0;
  int step_count = 0;
};

struct StepResult {
  std::array<double, 4> observation;
  double reward = 0.0;  // 1 if |angle| < threshold after the tick, else 0
  bool terminated = false;
};

class CartPoleEnv {
 public:
  explicit CartPoleEnv(CartPoleParams params = {}) : p_(params) {}

  const CartPoleParams& params() const { return p_; }
  const CartPoleState& state() const { return s_; }
  bool terminated() const { return terminated_; }
  std::array<double, 4> observation() const;

  // All four state components drawn uniform on [-noise, +noise].
  std::array<double, 4> reset(Rng& rng) { return reset(rng, p_.reset_noise); }
  std::array<double, 4> reset(Rng& rng, double noise_scale);

  // Test hook: place the system in an arbitrary state, episode live.
  void set_state(const CartPoleState& s);

  // Clamp the action, apply force for one dt, update termination/reward.
  // Throws std::logic_error if the episode has already terminated.
  StepResult step(double action);

  // Kinetic + potential energy of the cart-pole system; conserved by the
  // exact force-free dynamics.
  static double mechanical_energy(const CartPoleState& s, const CartPoleParams& p);

 private:
  CartPoleParams p_;
  CartPoleState s_;
  bool terminated_ = false;
};

}  // namespace evolab
