#include "evolab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace evolab {

ObservationSample sample_observations(std::size_t n, double low, double high,
                                      Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_observations: n must be >= 1");
  if (!(low < high)) {
    throw std::invalid_argument("sample_observations: low must be < high");
  }
  ObservationSample out;
  out.low = low;
  out.high = high;
  out.observations.resize(n);
  for (auto& obs : out.observations) {
    for (double& x : obs) x = rng.uniform(low, high);
  }
  return out;
}

ObservationSample sample_observations(std::size_t n, double low, double high,
                                      std::uint64_t seed) {
  Rng rng(seed);
  ObservationSample out = sample_observations(n, low, high, rng);
  out.seed = seed;
  return out;
}

Histogram histogram(const std::vector<double>& values, int bins, double lo,
                    double hi) {
  if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
  if (lo > hi) throw std::invalid_argument("histogram: lo must be <= hi");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const double width = hi - lo;
  for (double v : values) {
    std::size_t idx = 0;
    if (width > 0.0) {
      double f = (v - lo) / width * bins;
      idx = static_cast<std::size_t>(std::clamp(
          f, 0.0, static_cast<double>(bins - 1)));
    }
    ++h.counts[idx];
  }
  return h;
}

std::vector<double> policy_actions(const GaussianPolicy& policy,
                                   const ObservationSample& sample, Rng& rng,
                                   bool deterministic) {
  std::vector<double> actions;
  actions.reserve(sample.observations.size());
  for (const auto& obs : sample.observations) {
    std::vector<double> x(obs.begin(), obs.end());
    if (deterministic) {
      actions.push_back(policy.mean_action(x));
    } else {
      actions.push_back(policy.act(x, rng).first);
    }
  }
  return actions;
}

ActionDistribution action_distribution(const GaussianPolicy& policy,
                                       const ObservationSample& sample, Rng& rng,
                                       bool deterministic, int bins) {
  if (sample.observations.empty()) {
    throw std::invalid_argument("action_distribution: empty observation sample");
  }
  ActionDistribution out;
  out.actions = policy_actions(policy, sample, rng, deterministic);
  auto [lo_it, hi_it] = std::minmax_element(out.actions.begin(), out.actions.end());
  out.hist = histogram(out.actions, bins, *lo_it, *hi_it);
  return out;
}

CongruenceMatrix congruence_from_actions(const std::vector<double>& actions_a,
                                         const std::vector<double>& actions_b) {
  if (actions_a.size() != actions_b.size() || actions_a.empty()) {
    throw std::invalid_argument(
        "congruence_from_actions: action lists must be non-empty and equal length");
  }
  CongruenceMatrix m;
  for (std::size_t i = 0; i < actions_a.size(); ++i) {
    // Leftward iff action < 0; exactly 0 counts as rightward.
    int da = actions_a[i] < 0.0 ? 0 : 1;
    int db = actions_b[i] < 0.0 ? 0 : 1;
    m.proportions[da][db] += 1.0;
  }
  for (auto& row : m.proportions) {
    for (double& cell : row) cell /= static_cast<double>(actions_a.size());
  }
  return m;
}

CongruenceMatrix congruence_matrix(const GaussianPolicy& policy_a,
                                   const GaussianPolicy& policy_b,
                                   std::size_t n_obs, std::uint64_t seed,
                                   bool deterministic, double low, double high) {
  Rng obs_rng(derive_seed(seed, "cong_obs"));
  ObservationSample sample = sample_observations(n_obs, low, high, obs_rng);
  Rng act_a(derive_seed(seed, "cong_act_a"));
  Rng act_b(derive_seed(seed, "cong_act_b"));
  return congruence_from_actions(
      policy_actions(policy_a, sample, act_a, deterministic),
      policy_actions(policy_b, sample, act_b, deterministic));
}

CongruenceDistribution congruence_distribution(const GaussianPolicy& policy_a,
                                               const GaussianPolicy& policy_b,
                                               std::size_t runs,
                                               std::size_t obs_per_run,
                                               std::uint64_t seed,
                                               bool deterministic, double low,
                                               double high) {
  if (runs < 2) {
    throw std::invalid_argument("congruence_distribution: runs must be >= 2");
  }
  CongruenceDistribution out;
  out.observed.reserve(runs);
  out.shuffled.reserve(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    Rng obs_rng(derive_seed(seed, "cong_obs", r));
    ObservationSample sample = sample_observations(obs_per_run, low, high, obs_rng);

    Rng act_a(derive_seed(seed, "cong_act_a", r));
    Rng act_b(derive_seed(seed, "cong_act_b", r));
    std::vector<double> a = policy_actions(policy_a, sample, act_a, deterministic);
    std::vector<double> b = policy_actions(policy_b, sample, act_b, deterministic);
    out.observed.push_back(congruence_from_actions(a, b).congruence());

    // Null: same protocol, but policy_b sees the observations in a
    // shuffled order, breaking the per-observation pairing.
    ObservationSample shuffled_sample = sample;
    Rng perm_rng(derive_seed(seed, "cong_null_perm", r));
    perm_rng.shuffle(shuffled_sample.observations);
    Rng null_a(derive_seed(seed, "cong_null_act_a", r));
    Rng null_b(derive_seed(seed, "cong_null_act_b", r));
    std::vector<double> na = policy_actions(policy_a, sample, null_a, deterministic);
    std::vector<double> nb =
        policy_actions(policy_b, shuffled_sample, null_b, deterministic);
    out.shuffled.push_back(congruence_from_actions(na, nb).congruence());
  }
  out.welch = stats::welch_t(out.observed, out.shuffled);
  return out;
}

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

DynamicsTrace representational_dynamics(const std::vector<Mlp>& snapshots,
                                        const std::vector<int>& snapshot_indices,
                                        const SemanticDataset& ds) {
  if (snapshots.size() < 2) {
    throw std::invalid_argument("representational_dynamics: need >= 2 snapshots");
  }
  if (snapshot_indices.size() != snapshots.size()) {
    throw std::invalid_argument(
        "representational_dynamics: one index per snapshot required");
  }
  for (std::size_t k = 1; k < snapshot_indices.size(); ++k) {
    if (snapshot_indices[k] <= snapshot_indices[k - 1]) {
      throw std::invalid_argument(
          "representational_dynamics: snapshot indices must be strictly increasing");
    }
  }
  DynamicsTrace trace;
  trace.snapshot_indices = snapshot_indices;
  const std::size_t n = ds.num_items();
  for (const Mlp& net : snapshots) {
    std::vector<std::vector<double>> reps(n);
    for (std::size_t i = 0; i < n; ++i) {
      reps[i] = hidden_representation(net, i, ds);
    }
    double sum_super = 0.0, sum_sub = 0.0, sum_item = 0.0;
    std::size_t n_super = 0, n_sub = 0, n_item = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double d = euclidean(reps[i], reps[j]);
        if (ds.super_of[i] != ds.super_of[j]) {
          sum_super += d;
          ++n_super;
        } else if (ds.sub_of[i] != ds.sub_of[j]) {
          sum_sub += d;
          ++n_sub;
        } else {
          sum_item += d;
          ++n_item;
        }
      }
    }
    if (n_super == 0 || n_sub == 0 || n_item == 0) {
      throw std::invalid_argument(
          "representational_dynamics: hierarchy has no pairs at some level");
    }
    trace.superordinate.push_back(sum_super / static_cast<double>(n_super));
    trace.subordinate.push_back(sum_sub / static_cast<double>(n_sub));
    trace.item_level.push_back(sum_item / static_cast<double>(n_item));
  }
  return trace;
}

double half_crossing(const std::vector<int>& indices,
                     const std::vector<double>& values) {
  if (indices.size() != values.size() || values.empty()) {
    throw std::invalid_argument("half_crossing: need matching non-empty series");
  }
  const double target = 0.5 * values.back();
  if (values.front() >= target) return static_cast<double>(indices.front());
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] >= target) {
      // Linear interpolation between the bracketing snapshots.
      double span = values[k] - values[k - 1];
      double f = span > 0.0 ? (target - values[k - 1]) / span : 1.0;
      return indices[k - 1] + f * (indices[k] - indices[k - 1]);
    }
  }
  return static_cast<double>(indices.back());
}

CriterionResult train_to_criterion(const Mlp& net, const SemanticDataset& ds,
                                   double threshold, int max_epochs, Rng& rng,
                                   double lr) {
  if (threshold <= 0.0) {
    throw std::invalid_argument("train_to_criterion: threshold must be > 0");
  }
  if (max_epochs < 0) {
    throw std::invalid_argument("train_to_criterion: max_epochs must be >= 0");
  }
  Mlp tuned = net;
  if (semantic_loss(tuned, ds) <= threshold) return {true, 0};
  for (int e = 1; e <= max_epochs; ++e) {
    semantic_epoch(tuned, ds, lr, rng);
    if (semantic_loss(tuned, ds) <= threshold) return {true, e};
  }
  return {false, max_epochs};
}

ComparisonResult model_performance_comparison(
    const std::vector<GaussianPolicy>& policies,
    const std::vector<std::string>& names, const CartPoleParams& env_params,
    int n_episodes, std::uint64_t seed, bool deterministic) {
  if (policies.size() < 2) {
    throw std::invalid_argument(
        "model_performance_comparison: need >= 2 policies");
  }
  if (names.size() != policies.size()) {
    throw std::invalid_argument(
        "model_performance_comparison: one name per policy required");
  }
  ComparisonResult out;
  out.names = names;
  out.rewards.reserve(policies.size());
  for (const auto& policy : policies) {
    out.rewards.push_back(
        evaluate_policy(policy, env_params, n_episodes, seed, deterministic));
  }
  std::size_t m = policies.size() * (policies.size() - 1) / 2;
  for (std::size_t i = 0; i < policies.size(); ++i) {
    for (std::size_t j = i + 1; j < policies.size(); ++j) {
      ComparisonPair pair;
      pair.index_a = i;
      pair.index_b = j;
      pair.test = stats::mann_whitney_u(out.rewards[i], out.rewards[j]);
      pair.corrected_p = stats::bonferroni(pair.test.p_value, m);
      out.pairs.push_back(std::move(pair));
    }
  }
  return out;
}

}  // namespace evolab
