#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ethics/config.hpp"
#include "ethics/experiment.hpp"

namespace ethics {

/// Environment described by the [experiment] and [env] sections. A grab
/// layout file, when given, must be a standard room.
EnvSpec build_env_spec(const Config& cfg);

/// Full experiment for the sweep-free part of the config. Loads the human
/// dataset when shaping is on.
ExperimentConfig build_experiment(const Config& cfg);

/// Shortest round-trip decimal form.
std::string format_real(double x);

/// `episode,mean,stderr` with 1-based episode numbers.
void write_metric_csv(std::ostream& out, const RunAggregate& agg);

struct SweepPoint {
  std::string tag;
  double alpha = 0.0;
  double gamma = 0.0;
  double c_n = 0.0;
  double c_p = 0.0;
  WindowStat final_reward;
};

struct TrainReport {
  std::vector<std::filesystem::path> files;
  /// One entry per sweep point, in run order.
  std::vector<SweepPoint> points;
};

/// Runs every sweep point of the config and writes, per point tag:
/// `<tag>_<metric>.csv` for each metric and, when tables are saved,
/// `<tag>_run<k>.qtable`. Always writes `<name>_effective.ini`; a sweep
/// also writes `<name>_sweep_summary.csv` ranked by final-window reward.
TrainReport cli_train(const Config& cfg, const std::filesystem::path& out_dir,
                      std::ostream& log);

struct SynthReport {
  std::size_t pairs = 0;
  std::size_t states_covered = 0;
  std::size_t state_count = 0;
  std::size_t fallbacks = 0;

  double coverage() const {
    return static_cast<double>(states_covered) / static_cast<double>(state_count);
  }
  std::string summary() const;
};

/// Synthesizes `n` trajectories (grab) or episodes (driving) for the
/// environment in `cfg` and writes them to `out`.
SynthReport cli_synth(const Config& cfg, std::size_t n, std::uint64_t seed,
                      const std::filesystem::path& out);

/// "paths=<n> length=<k>" for a layout file, or for the canonical room.
/// Any rectangular layout with one start and one milk is accepted.
std::string cli_count_paths(const std::optional<std::filesystem::path>& layout);

struct EvalReport {
  std::vector<std::string> metric_names;
  std::vector<WindowStat> metrics;

  std::string summary() const;
};

/// Greedy rollouts of `table` without learning or shaping.
EvalReport cli_eval(const QTable& table, const EnvSpec& env,
                    std::size_t episodes, std::uint64_t seed);

}  // namespace ethics
