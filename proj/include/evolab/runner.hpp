#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "evolab/config.hpp"

namespace evolab {

inline constexpr std::string_view kVersion = "evolab 0.1.0";

// Written to manifest.json in every run directory. `artifacts` lists every
// file the run emitted (manifest included), sorted by name.
struct RunManifest {
  std::string config_hash;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> artifacts;
  std::string version{kVersion};
};

// Relative output paths land under $EVOLAB_OUT_ROOT when that is set.
std::filesystem::path resolve_out_dir(const std::string& out_dir);

// Dispatches on config.task / config.algorithm; writes history CSVs,
// checkpoints and snapshots into config.out_dir. On failure every file
// created by the run is removed before the exception propagates.
RunManifest run_train(const ExperimentConfig& config);

struct CongruenceArgs {
  std::string checkpoint_a;
  std::string checkpoint_b;
  std::size_t runs = 100;
  std::size_t obs_per_run = 100;
  bool deterministic = false;
  std::uint64_t seed = 1;
  std::string out_dir = "runs/congruence";
};
RunManifest run_analyze_congruence(const CongruenceArgs& args);

struct ActionsArgs {
  std::string checkpoint_a;
  std::string checkpoint_b;
  std::size_t n_obs = 10000;
  int bins = 75;
  bool deterministic = false;
  std::uint64_t seed = 1;
  std::string out_dir = "runs/actions";
};
RunManifest run_analyze_actions(const ActionsArgs& args);

struct DynamicsArgs {
  std::string snapshots_dir;
  std::string dataset_path;  // empty = built-in default dataset
  std::string out_dir = "runs/dynamics";
};
RunManifest run_analyze_dynamics(const DynamicsArgs& args);

struct CriterionArgs {
  std::string snapshots_dir;
  std::string dataset_path;
  double threshold = 2.0;
  int max_epochs = 4000;
  int repeats = 5;
  double lr = 0.1;
  std::uint64_t seed = 1;
  std::string out_dir = "runs/criterion";
};
RunManifest run_analyze_criterion(const CriterionArgs& args);

struct CompareArgs {
  std::vector<std::string> names;
  std::vector<std::string> checkpoints;
  int episodes = 50;
  bool deterministic = false;
  std::uint64_t seed = 1;
  std::string out_dir = "runs/compare";
};
RunManifest run_compare(const CompareArgs& args);

// Checkpoint files named snapshot_<label>_<index>.ckpt, sorted by index.
struct SnapshotFile {
  int index = 0;
  std::filesystem::path path;
};
std::vector<SnapshotFile> list_snapshots(const std::filesystem::path& dir);

}  // namespace evolab
