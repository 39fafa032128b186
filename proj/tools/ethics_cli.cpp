// Command-line front end: train, eval, synth, count-paths.
//
// Config values come from the --config file, then ETHICS_<SECTION>_<KEY>
// environment variables, then explicit flags.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ethics/harness.hpp"

namespace {

ethics::Config load_config(const std::string& path) {
  if (path.empty()) {
    ethics::Config cfg;
    cfg.apply_process_env();
    return cfg;
  }
  return ethics::Config::load(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ethics-shaped tabular SARSA experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> episodes;
  std::string out_dir = ".";

  auto* train = app.add_subcommand("train", "train agents and write metric CSVs");
  train->add_option("--config", config_path, "experiment config file")->required();
  train->add_option("--seed", seed, "master seed");
  train->add_option("--runs", runs, "independent runs");
  train->add_option("--episodes", episodes, "episodes per run");
  train->add_option("--out-dir", out_dir, "output directory");

  std::string qtable_path;
  std::size_t eval_episodes = 100;
  std::uint64_t eval_seed = 1;
  auto* eval = app.add_subcommand("eval", "greedy evaluation of a saved Q-table");
  eval->add_option("--qtable", qtable_path, "Q-table file")->required();
  eval->add_option("--config", config_path, "config describing the environment");
  eval->add_option("--episodes", eval_episodes, "evaluation episodes");
  eval->add_option("--seed", eval_seed, "evaluation seed");

  std::string env_name;
  std::string variant;
  std::size_t synth_n = 500;
  std::uint64_t synth_seed = 1;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "synthesize a human dataset");
  synth->add_option("--env", env_name, "grab or driving");
  synth->add_option("--variant", variant, "avoid or rescue (driving)");
  synth->add_option("--n", synth_n, "trajectories (grab) or episodes (driving)");
  synth->add_option("--seed", synth_seed, "seed");
  synth->add_option("--out", synth_out, "dataset file")->required();
  synth->add_option("--config", config_path, "config for environment parameters");

  std::string layout_path;
  auto* count = app.add_subcommand("count-paths", "count shortest routes to the milk");
  count->add_option("layout,--layout", layout_path,
                    "layout file (canonical room if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      ethics::Config cfg = load_config(config_path);
      if (seed) cfg.set("experiment.seed", std::to_string(*seed));
      if (runs) cfg.set("experiment.runs", std::to_string(*runs));
      if (episodes) cfg.set("experiment.episodes", std::to_string(*episodes));
      ethics::cli_train(cfg, out_dir, std::cout);
    } else if (*eval) {
      const ethics::Config cfg = load_config(config_path);
      const ethics::QTable table = ethics::load_qtable(qtable_path);
      std::cout << ethics::cli_eval(table, ethics::build_env_spec(cfg), eval_episodes,
                                    eval_seed)
                       .summary();
    } else if (*synth) {
      ethics::Config cfg = load_config(config_path);
      if (!env_name.empty()) cfg.set("experiment.env", env_name);
      if (!variant.empty()) cfg.set("env.variant", variant);
      std::cout << ethics::cli_synth(cfg, synth_n, synth_seed, synth_out).summary() << '\n';
    } else if (*count) {
      std::optional<std::filesystem::path> layout;
      if (!layout_path.empty()) layout = layout_path;
      std::cout << ethics::cli_count_paths(layout) << '\n';
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
