#include "evolab/policy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace evolab {

namespace {

std::vector<Activation> policy_activations(const std::vector<int>& layer_sizes) {
  if (layer_sizes.size() < 2)
    throw std::invalid_argument("GaussianPolicy: need at least input and output layer");
  if (layer_sizes.back() != 1)
    throw std::invalid_argument("GaussianPolicy: output layer must be scalar");
  std::vector<Activation> acts(layer_sizes.size() - 1, Activation::Relu);
  acts.back() = Activation::Identity;
  return acts;
}

}  // namespace

GaussianPolicy GaussianPolicy::init_random(const std::vector<int>& layer_sizes,
                                           double init_scale, Rng& rng) {
  GaussianPolicy p{Mlp(layer_sizes, policy_activations(layer_sizes)), 0.0};
  p.body.init_fanin_uniform(init_scale, rng);
  return p;
}

GaussianPolicy GaussianPolicy::zeros(const std::vector<int>& layer_sizes) {
  return GaussianPolicy{Mlp(layer_sizes, policy_activations(layer_sizes)), 0.0};
}

double GaussianPolicy::sigma() const { return std::exp(log_sigma); }

double GaussianPolicy::mean_action(const std::vector<double>& observation) const {
  return body.forward(observation)[0];
}

std::pair<double, double> GaussianPolicy::act(const std::vector<double>& observation,
                                              Rng& rng) const {
  double mu = mean_action(observation);
  double s = sigma();
  double action = mu + s * rng.normal();
  return {action, log_prob(action, mu)};
}

double GaussianPolicy::log_prob(double action, double mu) const {
  double s = sigma();
  double z = (action - mu) / s;
  return -0.5 * z * z - log_sigma - 0.5 * std::log(2.0 * std::numbers::pi);
}

std::vector<double> GaussianPolicy::to_genome() const {
  std::vector<double> g = body.to_flat();
  g.push_back(log_sigma);
  return g;
}

void GaussianPolicy::set_from_genome(const std::vector<double>& genome) {
  if (genome.size() != genome_length())
    throw std::invalid_argument("GaussianPolicy::set_from_genome: length mismatch");
  log_sigma = genome.back();
  body.set_from_flat(std::vector<double>(genome.begin(), genome.end() - 1));
}

Checkpoint GaussianPolicy::to_checkpoint() const {
  Checkpoint ck;
  ck.kind = "gaussian_policy";
  ck.layer_sizes = body.layer_sizes();
  ck.activations = body.activations();
  ck.params = to_genome();
  return ck;
}

GaussianPolicy GaussianPolicy::from_checkpoint(const Checkpoint& ck) {
  if (ck.kind != "gaussian_policy")
    throw std::invalid_argument("GaussianPolicy::from_checkpoint: kind is '" + ck.kind + "'");
  GaussianPolicy p{Mlp(ck.layer_sizes, ck.activations), 0.0};
  p.set_from_genome(ck.params);
  return p;
}

double EpisodeTrace::total_reward() const {
  double s = 0.0;
  for (double r : rewards) s += r;
  return s;
}

std::vector<double> compute_returns(const std::vector<double>& rewards, double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("compute_returns: gamma must be in [0, 1]");
  std::vector<double> returns(rewards.size());
  double acc = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    acc = rewards[t] + gamma * acc;
    returns[t] = acc;
  }
  return returns;
}

std::vector<double> normalize_returns(const std::vector<double>& returns, double epsilon) {
  if (epsilon <= 0.0)
    throw std::invalid_argument("normalize_returns: epsilon must be positive");
  if (returns.empty()) return {};
  double m = 0.0;
  for (double r : returns) m += r;
  m /= static_cast<double>(returns.size());
  double sd = 0.0;
  if (returns.size() > 1) {
    for (double r : returns) sd += (r - m) * (r - m);
    sd = std::sqrt(sd / static_cast<double>(returns.size() - 1));
  }
  std::vector<double> out(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i)
    out[i] = (returns[i] - m) / (sd + epsilon);
  return out;
}

EpisodeTrace run_episode(CartPoleEnv& env, const GaussianPolicy& policy,
                         Rng& reset_rng, Rng& action_rng) {
  EpisodeTrace trace;
  auto obs = env.reset(reset_rng);
  while (true) {
    std::vector<double> o(obs.begin(), obs.end());
    auto [action, logp] = policy.act(o, action_rng);
    StepResult step = env.step(action);
    trace.observations.push_back(std::move(o));
    trace.actions.push_back(action);
    trace.log_probs.push_back(logp);
    trace.rewards.push_back(step.reward);
    if (step.terminated) break;
    obs = step.observation;
  }
  return trace;
}

ReinforceStats reinforce_update(GaussianPolicy& policy, const EpisodeTrace& trace,
                                double gamma, double return_epsilon,
                                AdamState& adam, const AdamParams& adam_hp) {
  if (trace.length() == 0)
    throw std::invalid_argument("reinforce_update: empty trace");

  std::vector<double> rhat =
      normalize_returns(compute_returns(trace.rewards, gamma), return_epsilon);

  double s = policy.sigma();
  double inv_var = 1.0 / (s * s);
  Gradients acc = policy.body.zero_gradients();
  double dlog_sigma = 0.0;
  double loss = 0.0;

  for (std::size_t t = 0; t < trace.length(); ++t) {
    ActivationRecord rec = policy.body.forward_record(trace.observations[t]);
    double mu = rec.post.back()[0];
    double a = trace.actions[t];
    loss += -policy.log_prob(a, mu) * rhat[t];
    // dL/dmu = -Rhat * (a - mu) / sigma^2
    double dmu = -rhat[t] * (a - mu) * inv_var;
    Gradients g = policy.body.backward(rec, {dmu});
    for (std::size_t l = 0; l < acc.dw.size(); ++l) {
      for (std::size_t i = 0; i < acc.dw[l].size(); ++i) acc.dw[l][i] += g.dw[l][i];
      for (std::size_t i = 0; i < acc.db[l].size(); ++i) acc.db[l][i] += g.db[l][i];
    }
    // dL/dlog_sigma = -Rhat * (z^2 - 1), z = (a - mu)/sigma
    double z = (a - mu) / s;
    dlog_sigma += -rhat[t] * (z * z - 1.0);
  }

  std::vector<double> params = policy.to_genome();
  std::vector<double> grad = policy.body.flatten_gradients(acc);
  grad.push_back(dlog_sigma);
  adam_step(params, grad, adam, adam_hp);
  policy.set_from_genome(params);

  ReinforceStats stats;
  stats.loss = loss;
  stats.total_reward = trace.total_reward();
  return stats;
}

std::vector<double> reinforce_episodes(GaussianPolicy& policy,
                                       const CartPoleParams& env_params,
                                       int episodes, double gamma,
                                       double return_epsilon, double lr,
                                       std::uint64_t seed) {
  if (episodes < 0)
    throw std::invalid_argument("reinforce_episodes: episode count must be >= 0");
  CartPoleEnv env(env_params);
  AdamState adam(policy.genome_length());
  AdamParams hp;
  hp.lr = lr;
  std::vector<double> rewards;
  rewards.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    Rng reset_rng(derive_seed(seed, "rl_reset", static_cast<std::uint64_t>(e)));
    Rng action_rng(derive_seed(seed, "rl_action", static_cast<std::uint64_t>(e)));
    EpisodeTrace trace = run_episode(env, policy, reset_rng, action_rng);
    reinforce_update(policy, trace, gamma, return_epsilon, adam, hp);
    rewards.push_back(trace.total_reward());
  }
  return rewards;
}

ReinforceResult train_reinforce(const ReinforceConfig& config,
                                const CartPoleParams& env_params, std::uint64_t seed) {
  Rng init_rng(derive_seed(seed, "rl_init"));
  ReinforceResult result{
      GaussianPolicy::init_random(config.layer_sizes, config.init_scale, init_rng), {}};
  result.policy.log_sigma = config.log_sigma_init;
  result.episode_rewards =
      reinforce_episodes(result.policy, env_params, config.episodes, config.gamma,
                         config.return_epsilon, config.lr, derive_seed(seed, "rl_train"));
  return result;
}

std::vector<double> evaluate_policy(const GaussianPolicy& policy,
                                    const CartPoleParams& env_params, int n_episodes,
                                    std::uint64_t seed, bool deterministic) {
  if (n_episodes < 1)
    throw std::invalid_argument("evaluate_policy: n_episodes must be >= 1");
  CartPoleEnv env(env_params);
  std::vector<double> rewards;
  rewards.reserve(static_cast<std::size_t>(n_episodes));
  for (int e = 0; e < n_episodes; ++e) {
    Rng reset_rng(derive_seed(seed, "eval_reset", static_cast<std::uint64_t>(e)));
    Rng action_rng(derive_seed(seed, "eval_action", static_cast<std::uint64_t>(e)));
    auto obs = env.reset(reset_rng);
    double total = 0.0;
    while (true) {
      std::vector<double> o(obs.begin(), obs.end());
      double action = deterministic ? policy.mean_action(o)
                                    : policy.act(o, action_rng).first;
      StepResult step = env.step(action);
      total += step.reward;
      if (step.terminated) break;
      obs = step.observation;
    }
    rewards.push_back(total);
  }
  return rewards;
}

}  // namespace evolab
