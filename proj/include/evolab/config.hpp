#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "evolab/evolution.hpp"
#include "evolab/policy.hpp"
#include "evolab/semantic.hpp"
#include "evolab/tasks.hpp"

namespace evolab {

// Everything a run needs, resolved from profile defaults overlaid with an
// optional JSON file and command-line flags. The `paper` profile carries
// the full-scale budgets; `desk` shrinks them to single-machine scale.
struct ExperimentConfig {
  std::string task = "cartpole";   // cartpole | semantic
  std::string algorithm = "sgd";   // sgd | ga | ec | untrained
  std::string profile = "paper";   // paper | desk
  std::uint64_t master_seed = 1;
  int num_threads = 1;
  std::string out_dir = "runs/run";
  int snapshot_stride = 0;  // 0 disables snapshots (train pipelines)
  int eval_episodes = 50;
  std::string dataset_path;  // empty = built-in default dataset

  GaConfig ga;
  CartpoleTaskConfig cartpole;
  SemanticTaskConfig semantic;
  ReinforceConfig reinforce;
  SemanticSgdConfig semantic_sgd;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Profile defaults for a (task, algorithm) pair.
ExperimentConfig make_config(const std::string& task, const std::string& algorithm,
                             const std::string& profile);

// Full JSON image of a config (every field, keys sorted).
std::string config_to_json(const ExperimentConfig& config);

// Overlays a (possibly partial) JSON object onto `base`. Unknown keys and
// type mismatches throw std::invalid_argument with the key path.
ExperimentConfig config_from_json(const std::string& json_text,
                                  ExperimentConfig base);
ExperimentConfig load_config_file(const std::filesystem::path& path,
                                  ExperimentConfig base);

// FNV-1a hash of the canonical (key-sorted) dump of the scientific fields.
// Presentation fields — output directory, thread count, profile label and
// master seed — are excluded, so runs that must produce identical results
// share a hash. Stable under key reordering in the source file because the
// hash is computed from the parsed, re-serialized form.
std::uint64_t config_hash(const ExperimentConfig& config);
std::string config_hash_hex(const ExperimentConfig& config);

}  // namespace evolab
