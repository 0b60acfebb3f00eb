#include "evolab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "evolab/analysis.hpp"
#include "evolab/checkpoint.hpp"
#include "evolab/csvio.hpp"
#include "evolab/evolution.hpp"
#include "evolab/policy.hpp"
#include "evolab/semantic.hpp"
#include "evolab/stats.hpp"
#include "evolab/tasks.hpp"

namespace evolab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(const std::string& s) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(s)));
  return buf;
}

// Tracks the files a pipeline writes so a failed run can be cleaned up and
// a clean run can list exactly what it produced.
class ArtifactScope {
 public:
  explicit ArtifactScope(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
  }

  ~ArtifactScope() {
    if (committed_) return;
    for (const auto& name : names_) {
      std::error_code ec;
      fs::remove(dir_ / name, ec);
    }
  }

  const fs::path& dir() const { return dir_; }

  fs::path file(const std::string& name) {
    names_.push_back(name);
    return dir_ / name;
  }

  // Writes manifest.json and disarms cleanup.
  RunManifest finish(const std::string& config_hash, const std::string& started) {
    RunManifest manifest;
    manifest.config_hash = config_hash;
    manifest.started_at = started;
    names_.push_back("manifest.json");
    std::sort(names_.begin(), names_.end());
    manifest.artifacts = names_;
    manifest.finished_at = now_iso8601();
    json j{{"config_hash", manifest.config_hash},
           {"started_at", manifest.started_at},
           {"finished_at", manifest.finished_at},
           {"artifacts", manifest.artifacts},
           {"version", manifest.version}};
    std::ofstream out(dir_ / "manifest.json");
    if (!out) {
      throw std::runtime_error("cannot write " + (dir_ / "manifest.json").string());
    }
    out << j.dump(2) << "\n";
    out.close();
    if (!out) {
      throw std::runtime_error("failed writing " + (dir_ / "manifest.json").string());
    }
    committed_ = true;
    return manifest;
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
  bool committed_ = false;
};

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

SemanticDataset dataset_for(const std::string& dataset_path) {
  if (dataset_path.empty()) return default_dataset();
  return load_dataset(dataset_path);
}

GaussianPolicy load_policy(const std::string& path) {
  Checkpoint ck = load_checkpoint(path);
  if (ck.kind != "gaussian_policy") {
    throw std::invalid_argument("checkpoint " + path +
                                ": expected kind gaussian_policy, got " + ck.kind);
  }
  return GaussianPolicy::from_checkpoint(ck);
}

Mlp load_net(const std::string& path) {
  Checkpoint ck = load_checkpoint(path);
  if (ck.kind != "mlp") {
    throw std::invalid_argument("checkpoint " + path + ": expected kind mlp, got " +
                                ck.kind);
  }
  return mlp_from_checkpoint(ck);
}

json descriptive_json(const std::vector<double>& xs) {
  stats::Descriptive d = stats::descriptive(xs);
  return json{{"mean", d.mean}, {"sd", d.sd}, {"n", xs.size()}};
}

json test_json(const stats::TestResult& t) {
  return json{{"statistic", t.statistic},
              {"p_value", t.p_value},
              {"n_a", t.n_a},
              {"n_b", t.n_b},
              {"method", t.method}};
}

void write_generations_csv(const fs::path& path,
                           const std::vector<GenerationRecord>& history) {
  CsvTable table;
  table.header = {"generation", "population_size", "best_raw_fitness",
                  "best_finetuned_fitness", "mean_fitness"};
  for (const auto& rec : history) {
    table.rows.push_back({std::to_string(rec.generation),
                          std::to_string(rec.population_size),
                          format_double(rec.best_raw_fitness),
                          format_double(rec.best_finetuned_fitness),
                          format_double(rec.mean_fitness)});
  }
  write_csv(path, table);
}

void write_series_csv(const fs::path& path, const std::string& index_name,
                      const std::string& value_name,
                      const std::vector<double>& values, int first_index) {
  CsvTable table;
  table.header = {index_name, value_name};
  for (std::size_t i = 0; i < values.size(); ++i) {
    table.rows.push_back(
        {std::to_string(first_index + static_cast<int>(i)), format_double(values[i])});
  }
  write_csv(path, table);
}

RunManifest train_cartpole_sgd(const ExperimentConfig& config, ArtifactScope& scope,
                               const std::string& started) {
  ReinforceResult result =
      train_reinforce(config.reinforce, config.cartpole.env, config.master_seed);
  write_series_csv(scope.file("rewards.csv"), "episode", "total_reward",
                   result.episode_rewards, 0);
  save_checkpoint(scope.file("policy.ckpt"), result.policy.to_checkpoint());
  std::vector<double> eval =
      evaluate_policy(result.policy, config.cartpole.env, config.eval_episodes,
                      derive_seed(config.master_seed, "final_eval"));
  write_series_csv(scope.file("eval.csv"), "episode", "reward", eval, 0);
  stats::Descriptive d = stats::descriptive(eval);
  std::printf("sgd cartpole: eval mean %.1f sd %.1f over %d episodes\n", d.mean, d.sd,
              config.eval_episodes);
  return scope.finish(config_hash_hex(config), started);
}

RunManifest train_cartpole_untrained(const ExperimentConfig& config,
                                     ArtifactScope& scope,
                                     const std::string& started) {
  Rng rng(derive_seed(config.master_seed, "untrained_init"));
  GaussianPolicy policy = GaussianPolicy::init_random(
      config.cartpole.layer_sizes, config.cartpole.init_scale, rng);
  save_checkpoint(scope.file("policy.ckpt"), policy.to_checkpoint());
  std::vector<double> eval =
      evaluate_policy(policy, config.cartpole.env, config.eval_episodes,
                      derive_seed(config.master_seed, "final_eval"));
  write_series_csv(scope.file("eval.csv"), "episode", "reward", eval, 0);
  stats::Descriptive d = stats::descriptive(eval);
  std::printf("untrained cartpole: eval mean %.1f sd %.1f\n", d.mean, d.sd);
  return scope.finish(config_hash_hex(config), started);
}

EvolutionObserver progress_observer(int generations) {
  int stride = std::max(1, generations / 10);
  return [stride, generations](const GenerationView& view) {
    if (view.record.generation % stride == 0 ||
        view.record.generation == generations - 1) {
      std::printf("gen %d/%d pop %d best %.3f mean %.3f\n", view.record.generation,
                  generations, view.record.population_size,
                  view.record.best_finetuned_fitness, view.record.mean_fitness);
      std::fflush(stdout);
    }
  };
}

RunManifest train_evolution(const ExperimentConfig& config, ArtifactScope& scope,
                            const std::string& started) {
  GaConfig ga = config.ga;
  ga.num_threads = config.num_threads;
  ga.snapshot_stride = config.snapshot_stride;
  const bool ec = config.algorithm == "ec";

  EvolutionResult result;
  std::string kind;
  if (config.task == "cartpole") {
    CartpoleTaskAdapter adapter(config.cartpole);
    result = ec ? ec_run(adapter, ga, config.master_seed,
                         progress_observer(ga.generations))
                : ga_run(adapter, ga, config.master_seed,
                         progress_observer(ga.generations));
    kind = "gaussian_policy";
  } else {
    SemanticTaskAdapter adapter(dataset_for(config.dataset_path), config.semantic);
    result = ec ? ec_run(adapter, ga, config.master_seed,
                         progress_observer(ga.generations))
                : ga_run(adapter, ga, config.master_seed,
                         progress_observer(ga.generations));
    kind = "mlp";
  }

  // The final generation's best always joins the snapshot set so probes of
  // "the evolved initialization" have a definite file to load.
  if (ga.snapshot_stride > 0 &&
      (result.snapshots.empty() ||
       result.snapshots.back().first != ga.generations - 1)) {
    result.snapshots.emplace_back(ga.generations - 1, result.best_genome);
  }

  auto genome_checkpoint = [&](const Genome& genome) {
    if (config.task == "cartpole") {
      GaussianPolicy policy = GaussianPolicy::zeros(config.cartpole.layer_sizes);
      policy.set_from_genome(genome);
      return policy.to_checkpoint();
    }
    SemanticTaskAdapter adapter(dataset_for(config.dataset_path), config.semantic);
    return checkpoint_from_mlp(adapter.net_from_genome(genome));
  };

  write_generations_csv(scope.file("generations.csv"), result.history);
  save_checkpoint(scope.file("best.ckpt"), genome_checkpoint(result.best_genome));
  for (const auto& [gen, genome] : result.snapshots) {
    save_checkpoint(scope.file("snapshot_gen_" + std::to_string(gen) + ".ckpt"),
                    genome_checkpoint(genome));
  }
  if (config.task == "cartpole") {
    GaussianPolicy best = GaussianPolicy::zeros(config.cartpole.layer_sizes);
    best.set_from_genome(result.best_genome);
    std::vector<double> eval =
        evaluate_policy(best, config.cartpole.env, config.eval_episodes,
                        derive_seed(config.master_seed, "final_eval"));
    write_series_csv(scope.file("eval.csv"), "episode", "reward", eval, 0);
  }
  std::printf("%s %s: best fitness %.3f\n", config.algorithm.c_str(),
              config.task.c_str(), result.best_fitness);
  return scope.finish(config_hash_hex(config), started);
}

RunManifest train_semantic_sgd(const ExperimentConfig& config, ArtifactScope& scope,
                               const std::string& started) {
  SemanticDataset ds = dataset_for(config.dataset_path);
  // Mirrors train_sgd_semantic exactly (same seed derivations) so the
  // snapshots correspond to the library trainer's trajectory.
  Mlp net = make_semantic_net(ds, config.semantic_sgd.hidden);
  Rng init_rng(derive_seed(config.master_seed, "sgd_init"));
  net.init_uniform(config.semantic_sgd.init_scale, init_rng);
  Rng train_rng(derive_seed(config.master_seed, "sgd_train"));

  std::vector<double> losses{semantic_loss(net, ds)};
  auto want_snapshot = [&](int epoch) {
    if (config.snapshot_stride <= 0) return false;
    return epoch % config.snapshot_stride == 0 ||
           epoch == config.semantic_sgd.epochs;
  };
  if (want_snapshot(0)) {
    save_checkpoint(scope.file("snapshot_epoch_0.ckpt"), checkpoint_from_mlp(net));
  }
  for (int e = 1; e <= config.semantic_sgd.epochs; ++e) {
    semantic_epoch(net, ds, config.semantic_sgd.lr, train_rng);
    losses.push_back(semantic_loss(net, ds));
    if (want_snapshot(e)) {
      save_checkpoint(scope.file("snapshot_epoch_" + std::to_string(e) + ".ckpt"),
                      checkpoint_from_mlp(net));
    }
  }
  write_series_csv(scope.file("loss.csv"), "epoch", "loss", losses, 0);
  save_checkpoint(scope.file("net.ckpt"), checkpoint_from_mlp(net));
  std::printf("sgd semantic: final loss %.4f after %d epochs\n", losses.back(),
              config.semantic_sgd.epochs);
  return scope.finish(config_hash_hex(config), started);
}

RunManifest train_semantic_untrained(const ExperimentConfig& config,
                                     ArtifactScope& scope,
                                     const std::string& started) {
  SemanticDataset ds = dataset_for(config.dataset_path);
  Mlp net = make_semantic_net(ds, config.semantic_sgd.hidden);
  Rng rng(derive_seed(config.master_seed, "untrained_init"));
  net.init_uniform(config.semantic_sgd.init_scale, rng);
  save_checkpoint(scope.file("net.ckpt"), checkpoint_from_mlp(net));
  write_series_csv(scope.file("loss.csv"), "epoch", "loss",
                   {semantic_loss(net, ds)}, 0);
  return scope.finish(config_hash_hex(config), started);
}

}  // namespace

fs::path resolve_out_dir(const std::string& out_dir) {
  fs::path p(out_dir);
  if (p.is_absolute()) return p;
  const char* root = std::getenv("EVOLAB_OUT_ROOT");
  if (root && *root) return fs::path(root) / p;
  return p;
}

RunManifest run_train(const ExperimentConfig& config) {
  config.validate();
  std::string started = now_iso8601();
  ArtifactScope scope(resolve_out_dir(config.out_dir));
  {
    std::ofstream out(scope.file("config.json"));
    if (!out) {
      throw std::runtime_error("cannot write config.json in " +
                               scope.dir().string());
    }
    out << config_to_json(config);
  }
  if (config.task == "cartpole") {
    if (config.algorithm == "sgd") return train_cartpole_sgd(config, scope, started);
    if (config.algorithm == "untrained") {
      return train_cartpole_untrained(config, scope, started);
    }
    return train_evolution(config, scope, started);
  }
  if (config.algorithm == "sgd") return train_semantic_sgd(config, scope, started);
  if (config.algorithm == "untrained") {
    return train_semantic_untrained(config, scope, started);
  }
  return train_evolution(config, scope, started);
}

RunManifest run_analyze_congruence(const CongruenceArgs& args) {
  std::string started = now_iso8601();
  GaussianPolicy a = load_policy(args.checkpoint_a);
  GaussianPolicy b = load_policy(args.checkpoint_b);
  CongruenceDistribution dist = congruence_distribution(
      a, b, args.runs, args.obs_per_run, args.seed, args.deterministic);

  ArtifactScope scope(resolve_out_dir(args.out_dir));
  CsvTable table;
  table.header = {"run", "observed", "shuffled"};
  for (std::size_t r = 0; r < dist.observed.size(); ++r) {
    table.rows.push_back({std::to_string(r), format_double(dist.observed[r]),
                          format_double(dist.shuffled[r])});
  }
  write_csv(scope.file("congruence.csv"), table);

  json summary{{"checkpoint_a", args.checkpoint_a},
               {"checkpoint_b", args.checkpoint_b},
               {"runs", args.runs},
               {"obs_per_run", args.obs_per_run},
               {"deterministic", args.deterministic},
               {"seed", args.seed},
               {"observed", descriptive_json(dist.observed)},
               {"shuffled", descriptive_json(dist.shuffled)},
               {"welch", test_json(dist.welch)}};
  write_json_file(scope.file("congruence.json"), summary);
  std::printf("congruence: observed mean %.4f, shuffled mean %.4f, p = %.4g\n",
              stats::mean(dist.observed), stats::mean(dist.shuffled),
              dist.welch.p_value);
  return scope.finish(hash_hex(summary.dump()), started);
}

RunManifest run_analyze_actions(const ActionsArgs& args) {
  std::string started = now_iso8601();
  GaussianPolicy a = load_policy(args.checkpoint_a);
  GaussianPolicy b = load_policy(args.checkpoint_b);
  ObservationSample sample = sample_observations(
      args.n_obs, -1.0, 1.0, derive_seed(args.seed, "obs"));
  Rng rng_a(derive_seed(args.seed, "actions_a"));
  Rng rng_b(derive_seed(args.seed, "actions_b"));
  std::vector<double> actions_a = policy_actions(a, sample, rng_a, args.deterministic);
  std::vector<double> actions_b = policy_actions(b, sample, rng_b, args.deterministic);
  stats::TestResult ks = stats::ks_2samp(actions_a, actions_b);

  double lo = std::min(*std::min_element(actions_a.begin(), actions_a.end()),
                       *std::min_element(actions_b.begin(), actions_b.end()));
  double hi = std::max(*std::max_element(actions_a.begin(), actions_a.end()),
                       *std::max_element(actions_b.begin(), actions_b.end()));
  Histogram ha = histogram(actions_a, args.bins, lo, hi);
  Histogram hb = histogram(actions_b, args.bins, lo, hi);

  ArtifactScope scope(resolve_out_dir(args.out_dir));
  CsvTable actions;
  actions.header = {"index", "action_a", "action_b"};
  for (std::size_t i = 0; i < actions_a.size(); ++i) {
    actions.rows.push_back({std::to_string(i), format_double(actions_a[i]),
                            format_double(actions_b[i])});
  }
  write_csv(scope.file("actions.csv"), actions);

  CsvTable bins;
  bins.header = {"bin_lo", "bin_hi", "count_a", "count_b"};
  double width = (hi - lo) / args.bins;
  for (int k = 0; k < args.bins; ++k) {
    bins.rows.push_back({format_double(lo + k * width),
                         format_double(lo + (k + 1) * width),
                         std::to_string(ha.counts[k]), std::to_string(hb.counts[k])});
  }
  write_csv(scope.file("bins.csv"), bins);

  json summary{{"checkpoint_a", args.checkpoint_a},
               {"checkpoint_b", args.checkpoint_b},
               {"n_obs", args.n_obs},
               {"deterministic", args.deterministic},
               {"seed", args.seed},
               {"ks", test_json(ks)},
               {"range", json{{"lo", lo}, {"hi", hi}}}};
  write_json_file(scope.file("actions.json"), summary);
  std::printf("actions: KS D = %.4f, p = %.4g\n", ks.statistic, ks.p_value);
  return scope.finish(hash_hex(summary.dump()), started);
}

std::vector<SnapshotFile> list_snapshots(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw std::invalid_argument("not a directory: " + dir.string());
  }
  std::vector<SnapshotFile> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    fs::path p = entry.path();
    if (p.extension() != ".ckpt") continue;
    std::string stem = p.stem().string();
    if (stem.rfind("snapshot_", 0) != 0) continue;
    std::size_t us = stem.find_last_of('_');
    if (us == std::string::npos || us + 1 >= stem.size()) continue;
    std::string digits = stem.substr(us + 1);
    if (!std::all_of(digits.begin(), digits.end(),
                     [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    files.push_back({std::stoi(digits), p});
  }
  std::sort(files.begin(), files.end(),
            [](const SnapshotFile& x, const SnapshotFile& y) {
              return x.index < y.index;
            });
  for (std::size_t k = 1; k < files.size(); ++k) {
    if (files[k].index == files[k - 1].index) {
      throw std::invalid_argument("duplicate snapshot index " +
                                  std::to_string(files[k].index) + " in " +
                                  dir.string());
    }
  }
  return files;
}

RunManifest run_analyze_dynamics(const DynamicsArgs& args) {
  std::string started = now_iso8601();
  SemanticDataset ds = dataset_for(args.dataset_path);
  std::vector<SnapshotFile> files = list_snapshots(args.snapshots_dir);
  if (files.size() < 2) {
    throw std::invalid_argument("need >= 2 snapshot_*.ckpt files in " +
                                args.snapshots_dir);
  }
  std::vector<Mlp> nets;
  std::vector<int> indices;
  for (const auto& f : files) {
    nets.push_back(load_net(f.path.string()));
    indices.push_back(f.index);
  }
  DynamicsTrace trace = representational_dynamics(nets, indices, ds);
  double cross_super = half_crossing(trace.snapshot_indices, trace.superordinate);
  double cross_sub = half_crossing(trace.snapshot_indices, trace.subordinate);
  double cross_item = half_crossing(trace.snapshot_indices, trace.item_level);

  ArtifactScope scope(resolve_out_dir(args.out_dir));
  CsvTable table;
  table.header = {"snapshot", "superordinate", "subordinate", "item_level"};
  for (std::size_t k = 0; k < trace.snapshot_indices.size(); ++k) {
    table.rows.push_back({std::to_string(trace.snapshot_indices[k]),
                          format_double(trace.superordinate[k]),
                          format_double(trace.subordinate[k]),
                          format_double(trace.item_level[k])});
  }
  write_csv(scope.file("dynamics.csv"), table);

  json summary{{"snapshots_dir", args.snapshots_dir},
               {"half_crossing",
                json{{"superordinate", cross_super},
                     {"subordinate", cross_sub},
                     {"item_level", cross_item}}},
               {"ordered", cross_super < cross_sub && cross_sub < cross_item}};
  write_json_file(scope.file("dynamics.json"), summary);
  std::printf("dynamics: half-crossings super %.1f sub %.1f item %.1f\n", cross_super,
              cross_sub, cross_item);
  return scope.finish(hash_hex(summary.dump()), started);
}

RunManifest run_analyze_criterion(const CriterionArgs& args) {
  std::string started = now_iso8601();
  if (args.repeats < 1) {
    throw std::invalid_argument("criterion: repeats must be >= 1");
  }
  SemanticDataset ds = dataset_for(args.dataset_path);
  std::vector<SnapshotFile> files = list_snapshots(args.snapshots_dir);
  if (files.empty()) {
    throw std::invalid_argument("no snapshot_*.ckpt files in " + args.snapshots_dir);
  }

  ArtifactScope scope(resolve_out_dir(args.out_dir));
  CsvTable table;
  table.header = {"source", "snapshot", "repeat", "reached", "epochs"};

  auto median = [](std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
  };

  // Baseline: fresh random initializations of the snapshots' architecture,
  // same SGD recipe.
  Checkpoint arch = load_checkpoint(files.front().path.string());
  if (arch.layer_sizes.size() != 3) {
    throw std::invalid_argument("criterion: snapshot " + files.front().path.string() +
                                " is not a one-hidden-layer net");
  }
  int hidden = arch.layer_sizes[1];
  std::vector<double> baseline_epochs;
  for (int r = 0; r < args.repeats; ++r) {
    Mlp net = make_semantic_net(ds, hidden);
    Rng init_rng(derive_seed(args.seed, "criterion_baseline_init", r));
    net.init_uniform(0.1, init_rng);
    Rng rng(derive_seed(args.seed, "criterion_baseline", r));
    CriterionResult res =
        train_to_criterion(net, ds, args.threshold, args.max_epochs, rng, args.lr);
    baseline_epochs.push_back(static_cast<double>(res.epochs));
    table.rows.push_back({"baseline", "-1", std::to_string(r),
                          res.reached ? "1" : "0", std::to_string(res.epochs)});
  }

  json per_snapshot = json::array();
  for (const auto& f : files) {
    Mlp net = load_net(f.path.string());
    std::vector<double> epochs;
    for (int r = 0; r < args.repeats; ++r) {
      Rng rng(derive_seed(args.seed, "criterion", f.index, r));
      CriterionResult res =
          train_to_criterion(net, ds, args.threshold, args.max_epochs, rng, args.lr);
      epochs.push_back(static_cast<double>(res.epochs));
      table.rows.push_back({"snapshot", std::to_string(f.index), std::to_string(r),
                            res.reached ? "1" : "0", std::to_string(res.epochs)});
    }
    per_snapshot.push_back(json{{"snapshot", f.index}, {"median", median(epochs)}});
    std::printf("criterion: snapshot %d median %.1f epochs\n", f.index,
                median(epochs));
  }
  write_csv(scope.file("criterion.csv"), table);

  json summary{{"snapshots_dir", args.snapshots_dir},
               {"threshold", args.threshold},
               {"max_epochs", args.max_epochs},
               {"repeats", args.repeats},
               {"seed", args.seed},
               {"baseline_median", median(baseline_epochs)},
               {"snapshots", per_snapshot}};
  write_json_file(scope.file("criterion.json"), summary);
  std::printf("criterion: baseline median %.1f epochs\n", median(baseline_epochs));
  return scope.finish(hash_hex(summary.dump()), started);
}

RunManifest run_compare(const CompareArgs& args) {
  std::string started = now_iso8601();
  if (args.checkpoints.size() < 2) {
    throw std::invalid_argument("compare: need >= 2 checkpoints");
  }
  if (!args.names.empty() && args.names.size() != args.checkpoints.size()) {
    throw std::invalid_argument("compare: one name per checkpoint required");
  }
  std::vector<GaussianPolicy> policies;
  std::vector<std::string> names = args.names;
  for (std::size_t i = 0; i < args.checkpoints.size(); ++i) {
    policies.push_back(load_policy(args.checkpoints[i]));
    if (names.size() <= i) {
      names.push_back(fs::path(args.checkpoints[i]).stem().string());
    }
  }
  CartPoleParams env;
  ComparisonResult result = model_performance_comparison(
      policies, names, env, args.episodes, args.seed, args.deterministic);

  ArtifactScope scope(resolve_out_dir(args.out_dir));
  CsvTable table;
  table.header = {"episode"};
  for (const auto& n : result.names) table.header.push_back(n);
  for (int e = 0; e < args.episodes; ++e) {
    std::vector<std::string> row{std::to_string(e)};
    for (const auto& rewards : result.rewards) {
      row.push_back(format_double(rewards[static_cast<std::size_t>(e)]));
    }
    table.rows.push_back(std::move(row));
  }
  write_csv(scope.file("rewards.csv"), table);

  json models = json::array();
  for (std::size_t i = 0; i < result.names.size(); ++i) {
    json m = descriptive_json(result.rewards[i]);
    m["name"] = result.names[i];
    models.push_back(m);
    stats::Descriptive d = stats::descriptive(result.rewards[i]);
    std::printf("%-12s mean %8.2f sd %7.2f\n", result.names[i].c_str(), d.mean, d.sd);
  }
  json pairs = json::array();
  for (const auto& pair : result.pairs) {
    pairs.push_back(json{{"a", result.names[pair.index_a]},
                         {"b", result.names[pair.index_b]},
                         {"test", test_json(pair.test)},
                         {"corrected_p", pair.corrected_p}});
    std::printf("%s vs %s: U = %.1f, corrected p = %.4g\n",
                result.names[pair.index_a].c_str(),
                result.names[pair.index_b].c_str(), pair.test.statistic,
                pair.corrected_p);
  }
  json summary{{"episodes", args.episodes},
               {"seed", args.seed},
               {"deterministic", args.deterministic},
               {"models", models},
               {"pairs", pairs}};
  write_json_file(scope.file("comparison.json"), summary);
  return scope.finish(hash_hex(summary.dump()), started);
}

}  // namespace evolab
