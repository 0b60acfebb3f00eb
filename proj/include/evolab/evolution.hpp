#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "evolab/rng.hpp"

namespace evolab {

using Genome = std::vector<double>;

// Task-side interface for the GA/EC loops. evaluate must be pure given
// (genome, seed) — the determinism contract for parallel evaluation rests
// on this.
class TaskAdapter {
 public:
  virtual ~TaskAdapter() = default;
  virtual std::size_t genome_length() const = 0;
  virtual Genome initial_genome(std::uint64_t seed) const = 0;
  // Fitness of a genome as-is; higher is better.
  virtual double evaluate(const Genome& genome, std::uint64_t seed) const = 0;
  virtual bool has_fine_tune() const { return false; }
  // Lifetime learning: returns the tuned copy's genome. Only meaningful
  // when has_fine_tune() is true.
  virtual Genome fine_tune(const Genome& genome, std::uint64_t seed) const;
};

struct GaConfig {
  int generations = 2000;
  int pop_start = 1000;
  int pop_end = 10;
  double anneal_lambda = 0.1;
  int top_k = 3;
  double mutation_sd = 0.01;
  double selection_eps = 1e-6;
  int snapshot_stride = 0;  // 0 disables snapshots
  int num_threads = 1;
};

// Throws std::invalid_argument on any violated constraint.
void validate(const GaConfig& config);

// P(g) = round(P_start * exp((g/(G-1))^lambda * ln(P_end/P_start))),
// clamped below at min_size. G = 1 returns P_start by convention.
int population_size(int g, int G, int pop_start, int pop_end, double lambda,
                    int min_size = 1);

// Top-k parents (ties broken by lower index) and their selection
// probabilities p_i = (f_i - f_min + eps) / sum, f_min over the selected k.
struct SelectionDist {
  std::vector<std::size_t> parents;  // population indices, best first
  std::vector<double> probs;         // same order, sums to 1
};
SelectionDist selection_probabilities(const std::vector<double>& fitnesses, int top_k,
                                      double epsilon);
// Inverse-CDF draw from the distribution; returns a population index.
std::size_t sample_parent(const SelectionDist& dist, Rng& rng);

// child_i = parent_i + N(0, sigma_m) i.i.d. per entry.
Genome mutate(const Genome& parent, double sigma_m, Rng& rng);

// Snapshot generations {0, stride, 2*stride, ...} below G.
std::vector<int> snapshot_schedule(int stride, int G);

struct GenerationRecord {
  int generation = 0;
  int population_size = 0;
  std::vector<double> raw_fitness;        // evaluate() on the genomes themselves
  std::vector<double> finetuned_fitness;  // EC only; empty for the plain GA
  std::vector<std::size_t> parent_index;  // previous-generation parent per child; empty at g=0
  std::size_t best_index = 0;             // best individual by selection fitness
  double best_raw_fitness = 0.0;
  double best_finetuned_fitness = 0.0;  // equals best_raw_fitness for the plain GA
  double mean_fitness = 0.0;            // mean selection fitness
};

// Per-generation view handed to an observer before the next generation is
// spawned; genomes are the pre-fine-tune genomes (the heritable material).
struct GenerationView {
  const GenerationRecord& record;
  const std::vector<Genome>& genomes;
};
using EvolutionObserver = std::function<void(const GenerationView&)>;

struct EvolutionResult {
  std::vector<GenerationRecord> history;
  Genome best_genome;
  double best_fitness = 0.0;
  // (generation, best pre-fine-tune genome of that generation)
  std::vector<std::pair<int, Genome>> snapshots;
};

// Plain genetic algorithm: fitness = evaluate(genome). best_genome is the
// best-ever individual by raw fitness across all generations.
EvolutionResult ga_run(const TaskAdapter& adapter, const GaConfig& config,
                       std::uint64_t master_seed,
                       const EvolutionObserver& observer = nullptr);

// Evolutionary conditioning: each individual's fitness is evaluate() of an
// independently fine-tuned copy, while inheritance (selection + mutation)
// acts on the pre-fine-tune genomes; tuned weights are discarded.
// best_genome is the final generation's best pre-fine-tune genome by
// fine-tuned fitness.
EvolutionResult ec_run(const TaskAdapter& adapter, const GaConfig& config,
                       std::uint64_t master_seed,
                       const EvolutionObserver& observer = nullptr);

}  // namespace evolab
