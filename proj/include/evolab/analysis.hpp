#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "evolab/cartpole.hpp"
#include "evolab/mlp.hpp"
#include "evolab/policy.hpp"
#include "evolab/rng.hpp"
#include "evolab/semantic.hpp"
#include "evolab/stats.hpp"

namespace evolab {

struct ObservationSample {
  std::vector<std::array<double, 4>> observations;
  double low = -1.0;
  double high = 1.0;
  std::uint64_t seed = 0;
};

// n i.i.d. uniform 4-vectors on [low, high]^4.
ObservationSample sample_observations(std::size_t n, double low, double high,
                                      Rng& rng);
ObservationSample sample_observations(std::size_t n, double low, double high,
                                      std::uint64_t seed);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
};

// Equal-width bins over [lo, hi]; the top edge belongs to the last bin.
// lo == hi puts everything in bin 0. Callers comparing two samples should
// pass the pooled min/max so both histograms share bins.
Histogram histogram(const std::vector<double>& values, int bins, double lo,
                    double hi);

// One action per observation: a gaussian sample by default, the mean
// action when deterministic.
std::vector<double> policy_actions(const GaussianPolicy& policy,
                                   const ObservationSample& sample, Rng& rng,
                                   bool deterministic = false);

struct ActionDistribution {
  std::vector<double> actions;
  Histogram hist;  // over the sample's own min-max range
};

ActionDistribution action_distribution(const GaussianPolicy& policy,
                                       const ObservationSample& sample, Rng& rng,
                                       bool deterministic = false, int bins = 75);

// 2x2 proportions of action-direction pairs; index 0 = leftward
// (action < 0), 1 = rightward (action >= 0).
struct CongruenceMatrix {
  std::array<std::array<double, 2>, 2> proportions{};

  double congruence() const { return proportions[0][0] + proportions[1][1]; }
};

// Pure counting step: directions of paired actions, normalized by count.
CongruenceMatrix congruence_from_actions(const std::vector<double>& actions_a,
                                         const std::vector<double>& actions_b);

// Samples n_obs observations, lets both policies act on each (independent
// action draws per policy), and tabulates direction agreement.
CongruenceMatrix congruence_matrix(const GaussianPolicy& policy_a,
                                   const GaussianPolicy& policy_b,
                                   std::size_t n_obs, std::uint64_t seed,
                                   bool deterministic = false, double low = -1.0,
                                   double high = 1.0);

struct CongruenceDistribution {
  std::vector<double> observed;
  std::vector<double> shuffled;  // null: policy_b's observation order permuted
  stats::TestResult welch;       // observed vs shuffled
};

// `runs` congruence values plus a shuffled-pairing null of the same size.
CongruenceDistribution congruence_distribution(const GaussianPolicy& policy_a,
                                               const GaussianPolicy& policy_b,
                                               std::size_t runs,
                                               std::size_t obs_per_run,
                                               std::uint64_t seed,
                                               bool deterministic = false,
                                               double low = -1.0,
                                               double high = 1.0);

// Mean pairwise distances of item representations, one value per snapshot
// and hierarchy level: pairs straddling the superordinate split, pairs
// within a superordinate but across subordinates, and pairs within a
// subordinate category.
struct DynamicsTrace {
  std::vector<int> snapshot_indices;  // strictly increasing (epoch/generation)
  std::vector<double> superordinate;
  std::vector<double> subordinate;
  std::vector<double> item_level;
};

DynamicsTrace representational_dynamics(const std::vector<Mlp>& snapshots,
                                        const std::vector<int>& snapshot_indices,
                                        const SemanticDataset& ds);

// First (interpolated) snapshot index at which `values` reaches half of its
// final value; used to order when each hierarchy level is learned.
double half_crossing(const std::vector<int>& indices,
                     const std::vector<double>& values);

struct CriterionResult {
  bool reached = false;
  int epochs = 0;  // first epoch with loss <= threshold; max_epochs if not reached
};

// Fine-tunes a copy of the net with the semantic SGD recipe until the
// dataset loss falls to `threshold`. A net already below the threshold
// reports 0 epochs; exhausting max_epochs reports reached = false.
CriterionResult train_to_criterion(const Mlp& net, const SemanticDataset& ds,
                                   double threshold, int max_epochs, Rng& rng,
                                   double lr = 0.1);

struct ComparisonPair {
  std::size_t index_a = 0;
  std::size_t index_b = 0;
  stats::TestResult test;
  double corrected_p = 1.0;
};

struct ComparisonResult {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rewards;  // one vector per policy
  std::vector<ComparisonPair> pairs;         // all unordered pairs, Bonferroni-corrected
};

// Every policy plays the same n_episodes episode initializations; pairwise
// two-sided Mann-Whitney U with Bonferroni correction over all pairs.
ComparisonResult model_performance_comparison(
    const std::vector<GaussianPolicy>& policies,
    const std::vector<std::string>& names, const CartPoleParams& env_params,
    int n_episodes, std::uint64_t seed, bool deterministic = false);

}  // namespace evolab
