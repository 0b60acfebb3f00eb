#include "evolab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "evolab/parallel.hpp"

namespace evolab {

Genome TaskAdapter::fine_tune(const Genome&, std::uint64_t) const {
  throw std::logic_error("TaskAdapter::fine_tune: task does not support fine-tuning");
}

void validate(const GaConfig& config) {
  if (config.generations < 1)
    throw std::invalid_argument("GaConfig: generations must be >= 1");
  if (config.top_k < 1) throw std::invalid_argument("GaConfig: top_k must be >= 1");
  if (config.pop_end < config.top_k)
    throw std::invalid_argument("GaConfig: pop_end must be >= top_k");
  if (config.pop_start < config.pop_end)
    throw std::invalid_argument("GaConfig: pop_start must be >= pop_end");
  if (config.mutation_sd < 0.0)
    throw std::invalid_argument("GaConfig: mutation_sd must be >= 0");
  if (config.anneal_lambda <= 0.0)
    throw std::invalid_argument("GaConfig: anneal_lambda must be > 0");
  if (config.selection_eps <= 0.0)
    throw std::invalid_argument("GaConfig: selection_eps must be > 0");
  if (config.snapshot_stride < 0)
    throw std::invalid_argument("GaConfig: snapshot_stride must be >= 0");
}

int population_size(int g, int G, int pop_start, int pop_end, double lambda,
                    int min_size) {
  if (G < 1) throw std::invalid_argument("population_size: G must be >= 1");
  if (g < 0 || g >= G) throw std::invalid_argument("population_size: g out of range");
  if (G == 1) return std::max(pop_start, min_size);
  double frac = static_cast<double>(g) / static_cast<double>(G - 1);
  double p = pop_start *
             std::exp(std::pow(frac, lambda) *
                      std::log(static_cast<double>(pop_end) / pop_start));
  int size = static_cast<int>(std::lround(p));
  return std::max(size, min_size);
}

SelectionDist selection_probabilities(const std::vector<double>& fitnesses, int top_k,
                                      double epsilon) {
  if (fitnesses.empty())
    throw std::invalid_argument("selection_probabilities: empty population");
  if (top_k < 1 || static_cast<std::size_t>(top_k) > fitnesses.size())
    throw std::invalid_argument("selection_probabilities: top_k out of range");
  if (epsilon <= 0.0)
    throw std::invalid_argument("selection_probabilities: epsilon must be > 0");

  std::vector<std::size_t> order(fitnesses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Highest fitness first; stable_sort keeps lower indices first on ties.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return fitnesses[a] > fitnesses[b];
  });
  order.resize(static_cast<std::size_t>(top_k));

  double f_min = fitnesses[order.back()];
  for (std::size_t i : order) f_min = std::min(f_min, fitnesses[i]);

  SelectionDist dist;
  dist.parents = order;
  dist.probs.resize(order.size());
  double total = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    dist.probs[i] = fitnesses[order[i]] - f_min + epsilon;
    total += dist.probs[i];
  }
  for (double& p : dist.probs) p /= total;
  return dist;
}

std::size_t sample_parent(const SelectionDist& dist, Rng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    acc += dist.probs[i];
    if (u < acc) return dist.parents[i];
  }
  return dist.parents.back();  // guard against rounding in the partial sums
}

Genome mutate(const Genome& parent, double sigma_m, Rng& rng) {
  if (sigma_m < 0.0) throw std::invalid_argument("mutate: sigma_m must be >= 0");
  Genome child(parent.size());
  for (std::size_t i = 0; i < parent.size(); ++i)
    child[i] = parent[i] + rng.normal(0.0, sigma_m);
  return child;
}

std::vector<int> snapshot_schedule(int stride, int G) {
  if (stride < 1) throw std::invalid_argument("snapshot_schedule: stride must be >= 1");
  std::vector<int> gens;
  for (int g = 0; g < G; g += stride) gens.push_back(g);
  return gens;
}

namespace {

// Shared GA/EC loop; fine_tuning switches the EC behavior on.
EvolutionResult evolve(const TaskAdapter& adapter, const GaConfig& config,
                       std::uint64_t master_seed, const EvolutionObserver& observer,
                       bool fine_tuning) {
  validate(config);
  if (fine_tuning && !adapter.has_fine_tune())
    throw std::invalid_argument("ec_run: adapter does not provide fine_tune");

  std::vector<int> snapshot_gens;
  if (config.snapshot_stride > 0)
    snapshot_gens = snapshot_schedule(config.snapshot_stride, config.generations);

  EvolutionResult result;
  bool have_best_ever = false;

  std::vector<Genome> genomes;
  for (int g = 0; g < config.generations; ++g) {
    auto u64 = [](int v) { return static_cast<std::uint64_t>(v); };
    int pop = population_size(g, config.generations, config.pop_start, config.pop_end,
                              config.anneal_lambda, config.top_k);

    GenerationRecord rec;
    rec.generation = g;

    if (g == 0) {
      genomes.resize(static_cast<std::size_t>(pop));
      parallel_for(genomes.size(), config.num_threads, [&](std::size_t i) {
        genomes[i] = adapter.initial_genome(derive_seed(master_seed, "init", 0, i));
      });
    } else {
      // Children of the previous generation, pre-fine-tune genomes only.
      const std::vector<Genome> parents = std::move(genomes);
      const GenerationRecord& prev = result.history.back();
      const std::vector<double>& parent_fitness =
          fine_tuning ? prev.finetuned_fitness : prev.raw_fitness;
      SelectionDist dist =
          selection_probabilities(parent_fitness, config.top_k, config.selection_eps);
      Rng select_rng(derive_seed(master_seed, "select", u64(g)));
      rec.parent_index.resize(static_cast<std::size_t>(pop));
      for (std::size_t i = 0; i < rec.parent_index.size(); ++i)
        rec.parent_index[i] = sample_parent(dist, select_rng);
      genomes.assign(static_cast<std::size_t>(pop), Genome());
      for (std::size_t i = 0; i < genomes.size(); ++i) {
        Rng mutate_rng(derive_seed(master_seed, "mutate", u64(g), i));
        genomes[i] = mutate(parents[rec.parent_index[i]], config.mutation_sd, mutate_rng);
      }
    }

    rec.population_size = pop;
    rec.raw_fitness.resize(genomes.size());
    if (fine_tuning) rec.finetuned_fitness.resize(genomes.size());

    try {
      parallel_for(genomes.size(), config.num_threads, [&](std::size_t i) {
        rec.raw_fitness[i] =
            adapter.evaluate(genomes[i], derive_seed(master_seed, "eval_raw", u64(g), i));
        if (fine_tuning) {
          // Fine-tune an independent copy; the tuned genome never survives
          // past this fitness read.
          Genome tuned = adapter.fine_tune(genomes[i],
                                           derive_seed(master_seed, "finetune", u64(g), i));
          rec.finetuned_fitness[i] =
              adapter.evaluate(tuned, derive_seed(master_seed, "eval_ft", u64(g), i));
        }
      });
    } catch (const std::exception& e) {
      throw std::runtime_error("generation " + std::to_string(g) +
                               ": task adapter failed: " + e.what());
    }

    const std::vector<double>& selection_fitness =
        fine_tuning ? rec.finetuned_fitness : rec.raw_fitness;
    rec.best_index = 0;
    for (std::size_t i = 1; i < selection_fitness.size(); ++i)
      if (selection_fitness[i] > selection_fitness[rec.best_index]) rec.best_index = i;
    rec.best_raw_fitness = *std::max_element(rec.raw_fitness.begin(), rec.raw_fitness.end());
    rec.best_finetuned_fitness = fine_tuning
                                     ? rec.finetuned_fitness[rec.best_index]
                                     : rec.best_raw_fitness;
    rec.mean_fitness =
        std::accumulate(selection_fitness.begin(), selection_fitness.end(), 0.0) /
        static_cast<double>(selection_fitness.size());

    if (std::binary_search(snapshot_gens.begin(), snapshot_gens.end(), g))
      result.snapshots.emplace_back(g, genomes[rec.best_index]);

    if (fine_tuning) {
      // "Best" follows the organism-at-birth reading: the last generation's
      // best-by-fine-tuned-fitness individual, as it was born.
      result.best_genome = genomes[rec.best_index];
      result.best_fitness = rec.best_finetuned_fitness;
    } else {
      double gen_best = rec.raw_fitness[rec.best_index];
      if (!have_best_ever || gen_best > result.best_fitness) {
        result.best_genome = genomes[rec.best_index];
        result.best_fitness = gen_best;
        have_best_ever = true;
      }
    }

    result.history.push_back(std::move(rec));
    if (observer) observer(GenerationView{result.history.back(), genomes});
  }

  return result;
}

}  // namespace

EvolutionResult ga_run(const TaskAdapter& adapter, const GaConfig& config,
                       std::uint64_t master_seed, const EvolutionObserver& observer) {
  return evolve(adapter, config, master_seed, observer, false);
}

EvolutionResult ec_run(const TaskAdapter& adapter, const GaConfig& config,
                       std::uint64_t master_seed, const EvolutionObserver& observer) {
  return evolve(adapter, config, master_seed, observer, true);
}

}  // namespace evolab
