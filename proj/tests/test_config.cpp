#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>

#include <unistd.h>

#include "evolab/config.hpp"

using namespace evolab;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("evolab_cfg_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

std::string thrown_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "<no exception>";
}

}  // namespace

TEST_CASE("profile defaults: cartpole budgets") {
  ExperimentConfig paper = make_config("cartpole", "ga", "paper");
  CHECK(paper.ga.generations == 2000);
  CHECK(paper.ga.pop_start == 1000);
  CHECK(paper.ga.pop_end == 10);
  CHECK(paper.ga.anneal_lambda == 0.1);
  CHECK(paper.ga.top_k == 3);
  CHECK(paper.ga.mutation_sd == 0.01);
  CHECK(paper.reinforce.episodes == 2000);
  CHECK(paper.cartpole.layer_sizes == std::vector<int>{4, 64, 64, 1});
  CHECK(paper.cartpole.init_scale == 2.0);
  CHECK(paper.cartpole.env.force_gain == 10.0);
  CHECK(paper.cartpole.finetune_episodes == 100);
  CHECK(paper.snapshot_stride == 0);
  CHECK(paper.eval_episodes == 50);

  ExperimentConfig desk_ga = make_config("cartpole", "ga", "desk");
  CHECK(desk_ga.ga.generations == 300);
  CHECK(desk_ga.ga.pop_start == 200);
  CHECK(desk_ga.ga.pop_end == 10);
  CHECK(desk_ga.ga.anneal_lambda == 0.5);

  ExperimentConfig desk_ec = make_config("cartpole", "ec", "desk");
  CHECK(desk_ec.ga.generations == 150);
  CHECK(desk_ec.ga.pop_start == 50);
  CHECK(desk_ec.ga.pop_end == 10);
  CHECK(desk_ec.ga.anneal_lambda == 1.0);
  CHECK(desk_ec.cartpole.finetune_episodes == 100);
}

TEST_CASE("profile defaults: semantic budgets") {
  ExperimentConfig paper_ec = make_config("semantic", "ec", "paper");
  CHECK(paper_ec.ga.generations == 4000);
  CHECK(paper_ec.ga.pop_start == 100);
  CHECK(paper_ec.ga.pop_end == 100);
  CHECK(paper_ec.ga.anneal_lambda == 1.0);
  CHECK(paper_ec.snapshot_stride == 250);
  CHECK(paper_ec.semantic.hidden == 64);
  CHECK(paper_ec.semantic.lr == 0.1);
  CHECK(paper_ec.semantic.finetune_epochs == 100);
  CHECK(paper_ec.semantic_sgd.epochs == 2000);

  ExperimentConfig desk_ec = make_config("semantic", "ec", "desk");
  CHECK(desk_ec.ga.generations == 400);
  CHECK(desk_ec.ga.pop_start == 100);
  CHECK(desk_ec.snapshot_stride == 100);

  ExperimentConfig desk_ga = make_config("semantic", "ga", "desk");
  CHECK(desk_ga.ga.generations == 500);
  CHECK(desk_ga.snapshot_stride == 0);

  CHECK_THROWS_AS(make_config("golf", "ga", "desk"), std::invalid_argument);
  CHECK_THROWS_AS(make_config("cartpole", "ga", "laptop"), std::invalid_argument);
  CHECK_THROWS_AS(make_config("cartpole", "magic", "desk"), std::invalid_argument);
}

TEST_CASE("json round-trip restores every field onto a foreign base") {
  ExperimentConfig a = make_config("semantic", "ec", "desk");
  a.master_seed = 77;
  a.num_threads = 3;
  a.out_dir = "runs/custom";
  a.eval_episodes = 9;
  a.dataset_path = "data/things.csv";
  a.ga.mutation_sd = 0.5;
  a.ga.selection_eps = 1e-4;
  a.semantic.hidden = 17;
  a.semantic_sgd.epochs = 123;
  a.cartpole.env.gravity = 3.7;
  a.reinforce.lr = 0.01;

  ExperimentConfig b = config_from_json(config_to_json(a),
                                        make_config("cartpole", "sgd", "paper"));
  CHECK(config_to_json(b) == config_to_json(a));
  CHECK(config_hash(b) == config_hash(a));
  CHECK(b.task == "semantic");
  CHECK(b.algorithm == "ec");
  CHECK(b.master_seed == 77);
  CHECK(b.semantic.hidden == 17);
  CHECK(b.cartpole.env.gravity == 3.7);
}

TEST_CASE("partial overlays touch only the named keys") {
  ExperimentConfig base = make_config("cartpole", "ga", "desk");
  ExperimentConfig got = config_from_json(
      R"({"ga": {"generations": 42}, "master_seed": 9})", base);

  ExperimentConfig want = base;
  want.ga.generations = 42;
  want.master_seed = 9;
  CHECK(config_to_json(got) == config_to_json(want));
  CHECK(got.ga.pop_start == base.ga.pop_start);

  // An empty object is a no-op overlay.
  ExperimentConfig same = config_from_json("{}", base);
  CHECK(config_to_json(same) == config_to_json(base));
}

TEST_CASE("unknown keys and type mismatches are named precisely") {
  ExperimentConfig base = make_config("cartpole", "ga", "desk");

  std::string msg = thrown_message([&] { config_from_json(R"({"bogus": 1})", base); });
  CHECK(msg.find("unknown config key: bogus") != std::string::npos);

  msg = thrown_message([&] { config_from_json(R"({"ga": {"wat": 1}})", base); });
  CHECK(msg.find("unknown config key: ga.wat") != std::string::npos);

  msg = thrown_message(
      [&] { config_from_json(R"({"cartpole": {"env": {"nope": 1}}})", base); });
  CHECK(msg.find("unknown config key: cartpole.env.nope") != std::string::npos);

  msg = thrown_message(
      [&] { config_from_json(R"({"ga": {"generations": "many"}})", base); });
  CHECK(msg.find("config key ga.generations") != std::string::npos);

  msg = thrown_message([&] { config_from_json(R"({"ga": 5})", base); });
  CHECK(msg.find("ga.") != std::string::npos);
  CHECK(msg.find("expected an object") != std::string::npos);

  msg = thrown_message([&] { config_from_json("[1, 2]", base); });
  CHECK(msg.find("expected an object") != std::string::npos);

  msg = thrown_message([&] { config_from_json("{nope", base); });
  CHECK(msg.find("config is not valid JSON") != std::string::npos);
}

TEST_CASE("config files load with path-prefixed errors") {
  TempDir tmp;
  ExperimentConfig base = make_config("semantic", "ga", "desk");

  auto good = tmp.path / "ok.json";
  std::ofstream(good) << R"({"ga": {"pop_start": 100, "pop_end": 100}, "semantic": {"hidden": 11}})";
  ExperimentConfig got = load_config_file(good, base);
  CHECK(got.semantic.hidden == 11);
  CHECK(got.ga.generations == base.ga.generations);

  auto bad = tmp.path / "bad.json";
  std::ofstream(bad) << R"({"semantics": {}})";
  std::string msg = thrown_message([&] { load_config_file(bad, base); });
  CHECK(msg.find(bad.string()) != std::string::npos);
  CHECK(msg.find("unknown config key: semantics") != std::string::npos);

  msg = thrown_message([&] { load_config_file(tmp.path / "absent.json", base); });
  CHECK(msg.find("cannot open config file") != std::string::npos);
}

TEST_CASE("config_hash covers science and ignores presentation") {
  ExperimentConfig a = make_config("cartpole", "ec", "desk");
  ExperimentConfig b = a;
  b.master_seed = 999;
  b.num_threads = 16;
  b.out_dir = "elsewhere";
  b.profile = "paper";  // label only; budgets unchanged
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash_hex(a) == config_hash_hex(b));

  ExperimentConfig c = a;
  c.eval_episodes = 51;
  CHECK(config_hash(c) != config_hash(a));

  c = a;
  c.ga.mutation_sd = 0.011;
  CHECK(config_hash(c) != config_hash(a));

  c = a;
  c.task = "semantic";
  CHECK(config_hash(c) != config_hash(a));

  c = a;
  c.cartpole.env.gravity = 9.81;
  CHECK(config_hash(c) != config_hash(a));

  std::string hex = config_hash_hex(a);
  CHECK(hex.size() == 16);
  CHECK(std::stoull(hex, nullptr, 16) == config_hash(a));
}

TEST_CASE("validate pinpoints bad fields") {
  ExperimentConfig ok = make_config("cartpole", "ga", "desk");
  CHECK_NOTHROW(ok.validate());

  ExperimentConfig c = ok;
  c.task = "chess";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = ok;
  c.algorithm = "magic";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = ok;
  c.profile = "laptop";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = ok;
  c.num_threads = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = ok;
  c.eval_episodes = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = ok;
  c.out_dir.clear();
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = ok;
  c.ga.generations = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.algorithm = "sgd";  // the GA block is only validated for ga/ec runs
  CHECK_NOTHROW(c.validate());

  c = ok;
  c.cartpole.layer_sizes = {3, 8, 1};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = make_config("semantic", "ec", "desk");
  c.semantic.hidden = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  c = make_config("semantic", "sgd", "desk");
  c.semantic_sgd.lr = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
