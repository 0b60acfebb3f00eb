#pragma once

#include <cstdint>
#include <vector>

#include "evolab/cartpole.hpp"
#include "evolab/evolution.hpp"
#include "evolab/policy.hpp"
#include "evolab/semantic.hpp"

namespace evolab {

// GA/EC adapter for the cart-pole task. Fitness is the total reward of one
// episode played by the genome's policy; fine-tuning is a REINFORCE rollout
// on an independent copy (the genome's log-sigma rides along as the last
// parameter and both mutates and learns).
struct CartpoleTaskConfig {
  std::vector<int> layer_sizes = {4, 64, 64, 1};
  double init_scale = 2.0;
  CartPoleParams env;
  int finetune_episodes = 100;
  double gamma = 0.99;
  double lr = 1e-3;
  double return_epsilon = 1e-8;
};

class CartpoleTaskAdapter : public TaskAdapter {
 public:
  explicit CartpoleTaskAdapter(CartpoleTaskConfig config = {});

  std::size_t genome_length() const override { return genome_length_; }
  Genome initial_genome(std::uint64_t seed) const override;
  double evaluate(const Genome& genome, std::uint64_t seed) const override;
  bool has_fine_tune() const override { return true; }
  Genome fine_tune(const Genome& genome, std::uint64_t seed) const override;

  GaussianPolicy policy_from_genome(const Genome& genome) const;
  const CartpoleTaskConfig& config() const { return cfg_; }

 private:
  CartpoleTaskConfig cfg_;
  std::size_t genome_length_ = 0;
};

// GA/EC adapter for the semantic task. Fitness is the negated dataset loss
// (higher is better, so the shared selection path applies unchanged);
// fine-tuning is plain SGD for a fixed number of epochs.
struct SemanticTaskConfig {
  int hidden = 64;
  double init_scale = 0.1;
  double lr = 0.1;
  int finetune_epochs = 100;
};

class SemanticTaskAdapter : public TaskAdapter {
 public:
  SemanticTaskAdapter(SemanticDataset dataset, SemanticTaskConfig config = {});

  std::size_t genome_length() const override { return genome_length_; }
  Genome initial_genome(std::uint64_t seed) const override;
  double evaluate(const Genome& genome, std::uint64_t seed) const override;
  bool has_fine_tune() const override { return true; }
  Genome fine_tune(const Genome& genome, std::uint64_t seed) const override;

  Mlp net_from_genome(const Genome& genome) const;
  const SemanticDataset& dataset() const { return ds_; }
  const SemanticTaskConfig& config() const { return cfg_; }

 private:
  SemanticDataset ds_;
  SemanticTaskConfig cfg_;
  std::size_t genome_length_ = 0;
};

}  // namespace evolab
