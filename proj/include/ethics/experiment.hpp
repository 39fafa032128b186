#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ethics/driving.hpp"
#include "ethics/episode.hpp"
#include "ethics/grab_milk.hpp"
#include "ethics/human_model.hpp"
#include "ethics/shaping.hpp"

namespace ethics {

enum class EnvKind { Grab, Driving };

EnvKind parse_env_kind(std::string_view name);
std::string_view to_string(EnvKind kind);

struct EnvSpec {
  EnvKind kind = EnvKind::Grab;
  GrabLayout layout = canonical_layout();
  std::size_t grab_step_cap = kGrabStepCap;
  DrivingConfig driving;
};

std::unique_ptr<Environment> make_environment(const EnvSpec& spec);

struct ShapingSetup {
  ShapingConfig config;
  std::shared_ptr<const HumanPolicy> human;
};

struct ExperimentConfig {
  std::string name = "experiment";
  EnvSpec env;
  LearnerConfig learner;
  std::optional<ShapingSetup> shaping;
  std::size_t episodes = 4000;
  std::size_t runs = 20;
  bool keep_tables = false;

  /// Throws std::invalid_argument on non-positive counts or bad parameters.
  void validate() const;
};

/// Element-wise statistics over runs; stderr is the sample standard
/// deviation divided by sqrt(run count), and 0 for a single run.
struct RunAggregate {
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t run_count = 0;
};

/// Rejects empty or ragged input.
RunAggregate aggregate_runs(const std::vector<std::vector<double>>& series);

struct RunResult {
  /// series[m][e]: metric m of episode e.
  std::vector<std::vector<double>> series;
  std::optional<QTable> final_table;
};

struct ExperimentResult {
  std::vector<std::string> metric_names;
  std::vector<RunResult> runs;
  std::vector<RunAggregate> aggregates;

  std::size_t metric_index(std::string_view name) const;
  const RunAggregate& metric(std::string_view name) const {
    return aggregates[metric_index(name)];
  }
};

/// Metric names in emission order: reward, steps, then env event metrics.
std::vector<std::string> metric_names(const Environment& env);

/// Trains one learner from scratch with its own environment copy and rng.
RunResult run_single(const ExperimentConfig& cfg, std::uint64_t run_seed);

/// Run k uses derive_seed(master_seed, k). Runs are spread over OpenMP
/// threads; the result is identical to run_experiment_serial.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                std::uint64_t master_seed);
ExperimentResult run_experiment_serial(const ExperimentConfig& cfg,
                                       std::uint64_t master_seed);

struct WindowStat {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Mean and standard error across runs of each run's mean over its last
/// `window` episodes.
WindowStat final_window(const ExperimentResult& result, std::string_view metric,
                        std::size_t window);

}  // namespace ethics
