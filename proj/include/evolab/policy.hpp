#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "evolab/cartpole.hpp"
#include "evolab/checkpoint.hpp"
#include "evolab/mlp.hpp"
#include "evolab/rng.hpp"

namespace evolab {

// MLP body mapping observation -> scalar mean, plus a learnable global
// log-sigma; actions are drawn from N(mu(obs), exp(log_sigma)). The genome
// is the body's flat parameters with log_sigma appended.
struct GaussianPolicy {
  Mlp body;
  double log_sigma = 0.0;

  // Relu hidden layers, identity output; weights and biases drawn per layer
  // from U(+-init_scale/sqrt(fan_in)), matching the torch default at scale 1.
  static GaussianPolicy init_random(const std::vector<int>& layer_sizes,
                                    double init_scale, Rng& rng);
  // Zero-weight policy of the given shape (log_sigma 0).
  static GaussianPolicy zeros(const std::vector<int>& layer_sizes);

  double sigma() const;
  double mean_action(const std::vector<double>& observation) const;
  // Sampled action and its gaussian log-density.
  std::pair<double, double> act(const std::vector<double>& observation, Rng& rng) const;
  double log_prob(double action, double mu) const;

  std::size_t genome_length() const { return body.param_count() + 1; }
  std::vector<double> to_genome() const;
  void set_from_genome(const std::vector<double>& genome);

  Checkpoint to_checkpoint() const;
  static GaussianPolicy from_checkpoint(const Checkpoint& ck);
};

struct EpisodeTrace {
  std::vector<std::vector<double>> observations;
  std::vector<double> actions;
  std::vector<double> log_probs;
  std::vector<double> rewards;

  std::size_t length() const { return rewards.size(); }
  double total_reward() const;
};

// R_t = sum_k gamma^k r_{t+k}; empty rewards give empty returns.
std::vector<double> compute_returns(const std::vector<double>& rewards, double gamma);
// (R - mean) / (sample SD + epsilon); a single-element episode maps to {0}.
std::vector<double> normalize_returns(const std::vector<double>& returns, double epsilon);

// One full episode: reset from reset_rng, then sample actions from
// action_rng until termination.
EpisodeTrace run_episode(CartPoleEnv& env, const GaussianPolicy& policy,
                         Rng& reset_rng, Rng& action_rng);

struct ReinforceConfig {
  std::vector<int> layer_sizes = {4, 64, 64, 1};
  double init_scale = 2.0;
  double log_sigma_init = 0.0;
  double gamma = 0.99;
  double lr = 1e-3;
  double return_epsilon = 1e-8;
  int episodes = 2000;
};

struct ReinforceStats {
  double loss = 0.0;
  double total_reward = 0.0;
};

// One Adam step on L = -sum_t log p(a_t) * Rhat_t for the given episode.
// log_sigma receives its gradient like any other parameter.
ReinforceStats reinforce_update(GaussianPolicy& policy, const EpisodeTrace& trace,
                                double gamma, double return_epsilon,
                                AdamState& adam, const AdamParams& adam_hp);

// Runs `episodes` episodes of collect-then-update on an existing policy
// (fresh Adam state); returns the per-episode total rewards. This is both
// the tail of SGD training and the EC fine-tuning rollout.
std::vector<double> reinforce_episodes(GaussianPolicy& policy,
                                       const CartPoleParams& env_params,
                                       int episodes, double gamma,
                                       double return_epsilon, double lr,
                                       std::uint64_t seed);

struct ReinforceResult {
  GaussianPolicy policy;
  std::vector<double> episode_rewards;
};

// Full SGD training from a fresh random policy.
ReinforceResult train_reinforce(const ReinforceConfig& config,
                                const CartPoleParams& env_params, std::uint64_t seed);

// Episode rewards over n_episodes. Episode initializations depend only on
// (seed, episode index), so different policies evaluated with the same seed
// see identical resets. With deterministic=true the mean action is used
// instead of a sample.
std::vector<double> evaluate_policy(const GaussianPolicy& policy,
                                    const CartPoleParams& env_params, int n_episodes,
                                    std::uint64_t seed, bool deterministic = false);

}  // namespace evolab
