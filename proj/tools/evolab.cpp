// Command-line front end: train / analyze / compare / dataset subcommands.
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "evolab/config.hpp"
#include "evolab/runner.hpp"
#include "evolab/semantic.hpp"

namespace {

struct TrainOptions {
  std::string algorithm;
  std::string task;
  std::string config_path;
  std::string profile = "paper";
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
  int generations = 0;
  int episodes = 0;
  int epochs = 0;
  int snapshot_stride = -1;
  int eval_episodes = 0;
  std::string dataset;
};

void run_train_command(const TrainOptions& opt, const CLI::App* cmd) {
  evolab::ExperimentConfig config =
      evolab::make_config(opt.task, opt.algorithm, opt.profile);
  if (!opt.config_path.empty()) {
    config = evolab::load_config_file(opt.config_path, std::move(config));
  }
  // Positional arguments and explicit flags win over the config file.
  config.task = opt.task;
  config.algorithm = opt.algorithm;
  config.profile = opt.profile;
  if (cmd->count("--seed")) config.master_seed = opt.seed;
  if (cmd->count("--out")) config.out_dir = opt.out;
  if (cmd->count("--threads")) config.num_threads = opt.threads;
  if (cmd->count("--generations")) config.ga.generations = opt.generations;
  if (cmd->count("--episodes")) config.reinforce.episodes = opt.episodes;
  if (cmd->count("--epochs")) config.semantic_sgd.epochs = opt.epochs;
  if (cmd->count("--snapshot-stride")) config.snapshot_stride = opt.snapshot_stride;
  if (cmd->count("--eval-episodes")) config.eval_episodes = opt.eval_episodes;
  if (cmd->count("--dataset")) config.dataset_path = opt.dataset;
  evolab::RunManifest manifest = evolab::run_train(config);
  std::printf("wrote %zu artifacts to %s\n", manifest.artifacts.size(),
              evolab::resolve_out_dir(config.out_dir).string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neuroevolution and learning experiments"};
  app.require_subcommand(1);

  // train <algorithm> <task>
  TrainOptions train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a model and save artifacts");
  train_cmd
      ->add_option("algorithm", train.algorithm, "sgd | ga | ec | untrained")
      ->required()
      ->check(CLI::IsMember({"sgd", "ga", "ec", "untrained"}));
  train_cmd->add_option("task", train.task, "cartpole | semantic")
      ->required()
      ->check(CLI::IsMember({"cartpole", "semantic"}));
  train_cmd->add_option("--config", train.config_path, "JSON config overlay");
  train_cmd->add_option("--profile", train.profile, "paper | desk")
      ->check(CLI::IsMember({"paper", "desk"}));
  train_cmd->add_option("--seed", train.seed, "master seed");
  train_cmd->add_option("--out", train.out, "output directory");
  train_cmd->add_option("--threads", train.threads, "worker threads");
  train_cmd->add_option("--generations", train.generations, "GA/EC generations");
  train_cmd->add_option("--episodes", train.episodes, "REINFORCE training episodes");
  train_cmd->add_option("--epochs", train.epochs, "semantic SGD epochs");
  train_cmd->add_option("--snapshot-stride", train.snapshot_stride,
                        "snapshot every N generations/epochs (0 = off)");
  train_cmd->add_option("--eval-episodes", train.eval_episodes,
                        "final evaluation episodes");
  train_cmd->add_option("--dataset", train.dataset, "semantic dataset CSV");
  train_cmd->callback([&] { run_train_command(train, train_cmd); });

  // analyze {congruence, actions, dynamics, criterion}
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Behavioral and representational analyses");
  analyze_cmd->require_subcommand(1);

  evolab::CongruenceArgs cong;
  CLI::App* cong_cmd =
      analyze_cmd->add_subcommand("congruence", "Action-direction congruence vs shuffled null");
  cong_cmd->add_option("--a", cong.checkpoint_a, "policy checkpoint A")->required();
  cong_cmd->add_option("--b", cong.checkpoint_b, "policy checkpoint B")->required();
  cong_cmd->add_option("--runs", cong.runs, "congruence runs");
  cong_cmd->add_option("--obs", cong.obs_per_run, "observations per run");
  cong_cmd->add_flag("--deterministic", cong.deterministic, "use mean actions");
  cong_cmd->add_option("--seed", cong.seed, "seed");
  cong_cmd->add_option("--out", cong.out_dir, "output directory");
  cong_cmd->callback([&] { evolab::run_analyze_congruence(cong); });

  evolab::ActionsArgs actions;
  CLI::App* actions_cmd =
      analyze_cmd->add_subcommand("actions", "Action distributions and KS distance");
  actions_cmd->add_option("--a", actions.checkpoint_a, "policy checkpoint A")->required();
  actions_cmd->add_option("--b", actions.checkpoint_b, "policy checkpoint B")->required();
  actions_cmd->add_option("--n", actions.n_obs, "observation count");
  actions_cmd->add_option("--bins", actions.bins, "histogram bins");
  actions_cmd->add_flag("--deterministic", actions.deterministic, "use mean actions");
  actions_cmd->add_option("--seed", actions.seed, "seed");
  actions_cmd->add_option("--out", actions.out_dir, "output directory");
  actions_cmd->callback([&] { evolab::run_analyze_actions(actions); });

  evolab::DynamicsArgs dynamics;
  CLI::App* dynamics_cmd =
      analyze_cmd->add_subcommand("dynamics", "Representational distance traces");
  dynamics_cmd->add_option("--snapshots", dynamics.snapshots_dir, "snapshot directory")
      ->required();
  dynamics_cmd->add_option("--dataset", dynamics.dataset_path, "semantic dataset CSV");
  dynamics_cmd->add_option("--out", dynamics.out_dir, "output directory");
  dynamics_cmd->callback([&] { evolab::run_analyze_dynamics(dynamics); });

  evolab::CriterionArgs criterion;
  CLI::App* criterion_cmd =
      analyze_cmd->add_subcommand("criterion", "Train-to-criterion epoch counts");
  criterion_cmd
      ->add_option("--snapshots", criterion.snapshots_dir, "snapshot directory")
      ->required();
  criterion_cmd->add_option("--dataset", criterion.dataset_path, "semantic dataset CSV");
  criterion_cmd->add_option("--threshold", criterion.threshold, "loss threshold");
  criterion_cmd->add_option("--max-epochs", criterion.max_epochs, "epoch budget");
  criterion_cmd->add_option("--repeats", criterion.repeats, "fits per snapshot");
  criterion_cmd->add_option("--lr", criterion.lr, "SGD learning rate");
  criterion_cmd->add_option("--seed", criterion.seed, "seed");
  criterion_cmd->add_option("--out", criterion.out_dir, "output directory");
  criterion_cmd->callback([&] { evolab::run_analyze_criterion(criterion); });

  // compare
  evolab::CompareArgs compare;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Shared-seed reward comparison across checkpoints");
  compare_cmd->add_option("--ckpt", compare.checkpoints, "policy checkpoints (>= 2)")
      ->required()
      ->expected(2, -1);
  compare_cmd->add_option("--names", compare.names, "model names (same order)");
  compare_cmd->add_option("--episodes", compare.episodes, "episodes per model");
  compare_cmd->add_flag("--deterministic", compare.deterministic, "use mean actions");
  compare_cmd->add_option("--seed", compare.seed, "seed");
  compare_cmd->add_option("--out", compare.out_dir, "output directory");
  compare_cmd->callback([&] { evolab::run_compare(compare); });

  // dataset {validate, export}
  CLI::App* dataset_cmd = app.add_subcommand("dataset", "Semantic dataset utilities");
  dataset_cmd->require_subcommand(1);

  std::string validate_path;
  CLI::App* validate_cmd = dataset_cmd->add_subcommand("validate", "Check dataset invariants");
  validate_cmd->add_option("--dataset", validate_path, "dataset CSV (default: built-in)");
  validate_cmd->callback([&] {
    evolab::SemanticDataset ds = validate_path.empty()
                                     ? evolab::default_dataset()
                                     : evolab::load_dataset(validate_path);
    ds.validate();
    double active = 0.0;
    for (double t : ds.targets) active += t;
    std::printf("dataset OK: %zu items, %zu prepositions, %zu attributes, %g active cells\n",
                ds.num_items(), ds.num_prepositions(), ds.num_attributes(), active);
  });

  std::string export_path;
  CLI::App* export_cmd = dataset_cmd->add_subcommand("export", "Write the built-in dataset as CSV");
  export_cmd->add_option("--out", export_path, "output CSV path")->required();
  export_cmd->callback([&] {
    evolab::save_dataset(export_path, evolab::default_dataset());
    std::printf("wrote %s\n", export_path.c_str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
