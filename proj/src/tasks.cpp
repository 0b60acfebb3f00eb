#include "evolab/tasks.hpp"

#include <stdexcept>
#include <utility>

namespace evolab {

CartpoleTaskAdapter::CartpoleTaskAdapter(CartpoleTaskConfig config)
    : cfg_(std::move(config)) {
  if (cfg_.finetune_episodes < 0) {
    throw std::invalid_argument("finetune_episodes must be >= 0");
  }
  genome_length_ = GaussianPolicy::zeros(cfg_.layer_sizes).genome_length();
}

GaussianPolicy CartpoleTaskAdapter::policy_from_genome(const Genome& genome) const {
  GaussianPolicy policy = GaussianPolicy::zeros(cfg_.layer_sizes);
  policy.set_from_genome(genome);
  return policy;
}

Genome CartpoleTaskAdapter::initial_genome(std::uint64_t seed) const {
  Rng rng(seed);
  return GaussianPolicy::init_random(cfg_.layer_sizes, cfg_.init_scale, rng)
      .to_genome();
}

double CartpoleTaskAdapter::evaluate(const Genome& genome, std::uint64_t seed) const {
  GaussianPolicy policy = policy_from_genome(genome);
  CartPoleEnv env(cfg_.env);
  Rng reset_rng(derive_seed(seed, "reset"));
  Rng action_rng(derive_seed(seed, "action"));
  return run_episode(env, policy, reset_rng, action_rng).total_reward();
}

Genome CartpoleTaskAdapter::fine_tune(const Genome& genome, std::uint64_t seed) const {
  GaussianPolicy policy = policy_from_genome(genome);
  reinforce_episodes(policy, cfg_.env, cfg_.finetune_episodes, cfg_.gamma,
                     cfg_.return_epsilon, cfg_.lr, seed);
  return policy.to_genome();
}

SemanticTaskAdapter::SemanticTaskAdapter(SemanticDataset dataset,
                                         SemanticTaskConfig config)
    : ds_(std::move(dataset)), cfg_(config) {
  ds_.validate();
  if (cfg_.finetune_epochs < 0) {
    throw std::invalid_argument("finetune_epochs must be >= 0");
  }
  if (cfg_.lr <= 0.0) throw std::invalid_argument("lr must be positive");
  genome_length_ = make_semantic_net(ds_, cfg_.hidden).param_count();
}

Mlp SemanticTaskAdapter::net_from_genome(const Genome& genome) const {
  Mlp net = make_semantic_net(ds_, cfg_.hidden);
  net.set_from_flat(genome);
  return net;
}

Genome SemanticTaskAdapter::initial_genome(std::uint64_t seed) const {
  Mlp net = make_semantic_net(ds_, cfg_.hidden);
  Rng rng(seed);
  net.init_uniform(cfg_.init_scale, rng);
  return net.to_flat();
}

double SemanticTaskAdapter::evaluate(const Genome& genome, std::uint64_t) const {
  return -semantic_loss(net_from_genome(genome), ds_);
}

Genome SemanticTaskAdapter::fine_tune(const Genome& genome, std::uint64_t seed) const {
  Mlp net = net_from_genome(genome);
  Rng rng(seed);
  for (int e = 0; e < cfg_.finetune_epochs; ++e) {
    semantic_epoch(net, ds_, cfg_.lr, rng);
  }
  return net.to_flat();
}

}  // namespace evolab
