#include "evolab/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "json.hpp"

namespace evolab {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

json ga_to_json(const GaConfig& c) {
  return json{{"generations", c.generations},
              {"pop_start", c.pop_start},
              {"pop_end", c.pop_end},
              {"anneal_lambda", c.anneal_lambda},
              {"top_k", c.top_k},
              {"mutation_sd", c.mutation_sd},
              {"selection_eps", c.selection_eps}};
}

json env_to_json(const CartPoleParams& p) {
  return json{{"cart_mass", p.cart_mass},
              {"pole_mass", p.pole_mass},
              {"half_length", p.half_length},
              {"gravity", p.gravity},
              {"dt", p.dt},
              {"force_gain", p.force_gain},
              {"action_low", p.action_low},
              {"action_high", p.action_high},
              {"angle_threshold", p.angle_threshold},
              {"max_steps", p.max_steps},
              {"reset_noise", p.reset_noise}};
}

json cartpole_to_json(const CartpoleTaskConfig& c) {
  return json{{"layer_sizes", c.layer_sizes},
              {"init_scale", c.init_scale},
              {"env", env_to_json(c.env)},
              {"finetune_episodes", c.finetune_episodes},
              {"gamma", c.gamma},
              {"lr", c.lr},
              {"return_epsilon", c.return_epsilon}};
}

json semantic_to_json(const SemanticTaskConfig& c) {
  return json{{"hidden", c.hidden},
              {"init_scale", c.init_scale},
              {"lr", c.lr},
              {"finetune_epochs", c.finetune_epochs}};
}

json reinforce_to_json(const ReinforceConfig& c) {
  return json{{"layer_sizes", c.layer_sizes},
              {"init_scale", c.init_scale},
              {"log_sigma_init", c.log_sigma_init},
              {"gamma", c.gamma},
              {"lr", c.lr},
              {"return_epsilon", c.return_epsilon},
              {"episodes", c.episodes}};
}

json semantic_sgd_to_json(const SemanticSgdConfig& c) {
  return json{{"hidden", c.hidden},
              {"init_scale", c.init_scale},
              {"lr", c.lr},
              {"epochs", c.epochs}};
}

// The scientific payload: everything that determines run results.
json science_json(const ExperimentConfig& c) {
  return json{{"task", c.task},
              {"algorithm", c.algorithm},
              {"snapshot_stride", c.snapshot_stride},
              {"eval_episodes", c.eval_episodes},
              {"dataset_path", c.dataset_path},
              {"ga", ga_to_json(c.ga)},
              {"cartpole", cartpole_to_json(c.cartpole)},
              {"semantic", semantic_to_json(c.semantic)},
              {"reinforce", reinforce_to_json(c.reinforce)},
              {"semantic_sgd", semantic_sgd_to_json(c.semantic_sgd)}};
}

template <typename T>
void assign(const json& obj, const std::string& path, T& field) {
  try {
    field = obj.get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("config key " + path + ": " + e.what());
  }
}

// Overlays every key of `obj` onto the handlers map; unknown keys throw.
void overlay_object(
    const json& obj, const std::string& prefix,
    const std::vector<std::pair<std::string, std::function<void(const json&)>>>&
        handlers) {
  require(obj.is_object(), "config key " + (prefix.empty() ? "<root>" : prefix) +
                               ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool handled = false;
    for (const auto& [name, fn] : handlers) {
      if (name == it.key()) {
        fn(it.value());
        handled = true;
        break;
      }
    }
    require(handled, "unknown config key: " + prefix + it.key());
  }
}

void overlay_ga(const json& obj, GaConfig& c) {
  overlay_object(obj, "ga.",
                 {{"generations", [&](const json& v) { assign(v, "ga.generations", c.generations); }},
                  {"pop_start", [&](const json& v) { assign(v, "ga.pop_start", c.pop_start); }},
                  {"pop_end", [&](const json& v) { assign(v, "ga.pop_end", c.pop_end); }},
                  {"anneal_lambda", [&](const json& v) { assign(v, "ga.anneal_lambda", c.anneal_lambda); }},
                  {"top_k", [&](const json& v) { assign(v, "ga.top_k", c.top_k); }},
                  {"mutation_sd", [&](const json& v) { assign(v, "ga.mutation_sd", c.mutation_sd); }},
                  {"selection_eps", [&](const json& v) { assign(v, "ga.selection_eps", c.selection_eps); }}});
}

void overlay_env(const json& obj, CartPoleParams& p) {
  overlay_object(obj, "cartpole.env.",
                 {{"cart_mass", [&](const json& v) { assign(v, "cartpole.env.cart_mass", p.cart_mass); }},
                  {"pole_mass", [&](const json& v) { assign(v, "cartpole.env.pole_mass", p.pole_mass); }},
                  {"half_length", [&](const json& v) { assign(v, "cartpole.env.half_length", p.half_length); }},
                  {"gravity", [&](const json& v) { assign(v, "cartpole.env.gravity", p.gravity); }},
                  {"dt", [&](const json& v) { assign(v, "cartpole.env.dt", p.dt); }},
                  {"force_gain", [&](const json& v) { assign(v, "cartpole.env.force_gain", p.force_gain); }},
                  {"action_low", [&](const json& v) { assign(v, "cartpole.env.action_low", p.action_low); }},
                  {"action_high", [&](const json& v) { assign(v, "cartpole.env.action_high", p.action_high); }},
                  {"angle_threshold", [&](const json& v) { assign(v, "cartpole.env.angle_threshold", p.angle_threshold); }},
                  {"max_steps", [&](const json& v) { assign(v, "cartpole.env.max_steps", p.max_steps); }},
                  {"reset_noise", [&](const json& v) { assign(v, "cartpole.env.reset_noise", p.reset_noise); }}});
}

void overlay_cartpole(const json& obj, CartpoleTaskConfig& c) {
  overlay_object(obj, "cartpole.",
                 {{"layer_sizes", [&](const json& v) { assign(v, "cartpole.layer_sizes", c.layer_sizes); }},
                  {"init_scale", [&](const json& v) { assign(v, "cartpole.init_scale", c.init_scale); }},
                  {"env", [&](const json& v) { overlay_env(v, c.env); }},
                  {"finetune_episodes", [&](const json& v) { assign(v, "cartpole.finetune_episodes", c.finetune_episodes); }},
                  {"gamma", [&](const json& v) { assign(v, "cartpole.gamma", c.gamma); }},
                  {"lr", [&](const json& v) { assign(v, "cartpole.lr", c.lr); }},
                  {"return_epsilon", [&](const json& v) { assign(v, "cartpole.return_epsilon", c.return_epsilon); }}});
}

void overlay_semantic(const json& obj, SemanticTaskConfig& c) {
  overlay_object(obj, "semantic.",
                 {{"hidden", [&](const json& v) { assign(v, "semantic.hidden", c.hidden); }},
                  {"init_scale", [&](const json& v) { assign(v, "semantic.init_scale", c.init_scale); }},
                  {"lr", [&](const json& v) { assign(v, "semantic.lr", c.lr); }},
                  {"finetune_epochs", [&](const json& v) { assign(v, "semantic.finetune_epochs", c.finetune_epochs); }}});
}

void overlay_reinforce(const json& obj, ReinforceConfig& c) {
  overlay_object(obj, "reinforce.",
                 {{"layer_sizes", [&](const json& v) { assign(v, "reinforce.layer_sizes", c.layer_sizes); }},
                  {"init_scale", [&](const json& v) { assign(v, "reinforce.init_scale", c.init_scale); }},
                  {"log_sigma_init", [&](const json& v) { assign(v, "reinforce.log_sigma_init", c.log_sigma_init); }},
                  {"gamma", [&](const json& v) { assign(v, "reinforce.gamma", c.gamma); }},
                  {"lr", [&](const json& v) { assign(v, "reinforce.lr", c.lr); }},
                  {"return_epsilon", [&](const json& v) { assign(v, "reinforce.return_epsilon", c.return_epsilon); }},
                  {"episodes", [&](const json& v) { assign(v, "reinforce.episodes", c.episodes); }}});
}

void overlay_semantic_sgd(const json& obj, SemanticSgdConfig& c) {
  overlay_object(obj, "semantic_sgd.",
                 {{"hidden", [&](const json& v) { assign(v, "semantic_sgd.hidden", c.hidden); }},
                  {"init_scale", [&](const json& v) { assign(v, "semantic_sgd.init_scale", c.init_scale); }},
                  {"lr", [&](const json& v) { assign(v, "semantic_sgd.lr", c.lr); }},
                  {"epochs", [&](const json& v) { assign(v, "semantic_sgd.epochs", c.epochs); }}});
}

}  // namespace

void ExperimentConfig::validate() const {
  require(task == "cartpole" || task == "semantic",
          "task must be cartpole or semantic, got '" + task + "'");
  require(algorithm == "sgd" || algorithm == "ga" || algorithm == "ec" ||
              algorithm == "untrained",
          "algorithm must be sgd, ga, ec or untrained, got '" + algorithm + "'");
  require(profile == "paper" || profile == "desk",
          "profile must be paper or desk, got '" + profile + "'");
  require(num_threads >= 1, "num_threads must be >= 1");
  require(snapshot_stride >= 0, "snapshot_stride must be >= 0");
  require(eval_episodes >= 1, "eval_episodes must be >= 1");
  require(!out_dir.empty(), "out_dir must be non-empty");
  if (algorithm == "ga" || algorithm == "ec") {
    evolab::validate(ga);
  }
  if (task == "cartpole") {
    require(cartpole.layer_sizes.size() >= 2 && cartpole.layer_sizes.front() == 4 &&
                cartpole.layer_sizes.back() == 1,
            "cartpole.layer_sizes must map 4 observations to 1 action");
    require(cartpole.env.dt > 0.0, "cartpole.env.dt must be > 0");
    require(cartpole.env.max_steps >= 1, "cartpole.env.max_steps must be >= 1");
    require(cartpole.finetune_episodes >= 0,
            "cartpole.finetune_episodes must be >= 0");
    require(reinforce.episodes >= 0, "reinforce.episodes must be >= 0");
    require(reinforce.lr > 0.0, "reinforce.lr must be > 0");
  } else {
    require(semantic.hidden >= 1, "semantic.hidden must be >= 1");
    require(semantic.lr > 0.0, "semantic.lr must be > 0");
    require(semantic.finetune_epochs >= 0, "semantic.finetune_epochs must be >= 0");
    require(semantic_sgd.hidden >= 1, "semantic_sgd.hidden must be >= 1");
    require(semantic_sgd.lr > 0.0, "semantic_sgd.lr must be > 0");
    require(semantic_sgd.epochs >= 0, "semantic_sgd.epochs must be >= 0");
  }
}

ExperimentConfig make_config(const std::string& task, const std::string& algorithm,
                             const std::string& profile) {
  ExperimentConfig c;
  c.task = task;
  c.algorithm = algorithm;
  c.profile = profile;
  require(profile == "paper" || profile == "desk",
          "profile must be paper or desk, got '" + profile + "'");

  if (task == "cartpole") {
    // Full-scale budgets: 1000->10 annealed population over 2000
    // generations, lambda 0.1, 100-episode fine-tuning rollouts.
    c.ga.generations = 2000;
    c.ga.pop_start = 1000;
    c.ga.pop_end = 10;
    c.ga.anneal_lambda = 0.1;
    c.reinforce.episodes = 2000;
    if (profile == "desk") {
      if (algorithm == "ec") {
        c.ga.generations = 150;
        c.ga.pop_start = 50;
        c.ga.pop_end = 10;
        c.ga.anneal_lambda = 1.0;
      } else {
        c.ga.generations = 300;
        c.ga.pop_start = 200;
        c.ga.pop_end = 10;
        c.ga.anneal_lambda = 0.5;
      }
    }
  } else if (task == "semantic") {
    // Constant population of 100 over 4000 generations at full scale.
    c.ga.generations = 4000;
    c.ga.pop_start = 100;
    c.ga.pop_end = 100;
    c.ga.anneal_lambda = 1.0;
    if (algorithm == "ec") c.snapshot_stride = 250;
    if (profile == "desk") {
      if (algorithm == "ec") {
        c.ga.generations = 400;
        c.snapshot_stride = 100;
      } else {
        c.ga.generations = 500;
      }
    }
  } else {
    throw std::invalid_argument("task must be cartpole or semantic, got '" + task +
                                "'");
  }
  c.validate();
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j = science_json(c);
  j["profile"] = c.profile;
  j["master_seed"] = c.master_seed;
  j["num_threads"] = c.num_threads;
  j["out_dir"] = c.out_dir;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& json_text,
                                  ExperimentConfig base) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c = std::move(base);
  overlay_object(
      obj, "",
      {{"task", [&](const json& v) { assign(v, "task", c.task); }},
       {"algorithm", [&](const json& v) { assign(v, "algorithm", c.algorithm); }},
       {"profile", [&](const json& v) { assign(v, "profile", c.profile); }},
       {"master_seed", [&](const json& v) { assign(v, "master_seed", c.master_seed); }},
       {"num_threads", [&](const json& v) { assign(v, "num_threads", c.num_threads); }},
       {"out_dir", [&](const json& v) { assign(v, "out_dir", c.out_dir); }},
       {"snapshot_stride", [&](const json& v) { assign(v, "snapshot_stride", c.snapshot_stride); }},
       {"eval_episodes", [&](const json& v) { assign(v, "eval_episodes", c.eval_episodes); }},
       {"dataset_path", [&](const json& v) { assign(v, "dataset_path", c.dataset_path); }},
       {"ga", [&](const json& v) { overlay_ga(v, c.ga); }},
       {"cartpole", [&](const json& v) { overlay_cartpole(v, c.cartpole); }},
       {"semantic", [&](const json& v) { overlay_semantic(v, c.semantic); }},
       {"reinforce", [&](const json& v) { overlay_reinforce(v, c.reinforce); }},
       {"semantic_sgd", [&](const json& v) { overlay_semantic_sgd(v, c.semantic_sgd); }}});
  return c;
}

ExperimentConfig load_config_file(const std::filesystem::path& path,
                                  ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return config_from_json(buf.str(), std::move(base));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  // nlohmann::json keeps object keys sorted, so dump() is canonical.
  std::string dump = science_json(c).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash_hex(const ExperimentConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(config_hash(c)));
  return std::string(buf);
}

}  // namespace evolab
