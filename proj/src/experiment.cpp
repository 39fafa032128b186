#include "ethics/experiment.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ethics {

namespace {

double mean_of(const std::vector<double>& xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double stderr_of(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double n = static_cast<double>(xs.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

ExperimentResult finish(const ExperimentConfig& cfg,
                        std::vector<RunResult> runs) {
  ExperimentResult result;
  result.metric_names = metric_names(*make_environment(cfg.env));
  result.runs = std::move(runs);
  for (std::size_t m = 0; m < result.metric_names.size(); ++m) {
    std::vector<std::vector<double>> per_run;
    per_run.reserve(result.runs.size());
    for (const RunResult& r : result.runs) per_run.push_back(r.series[m]);
    result.aggregates.push_back(aggregate_runs(per_run));
  }
  return result;
}

}  // namespace

EnvKind parse_env_kind(std::string_view name) {
  if (name == "grab") return EnvKind::Grab;
  if (name == "driving") return EnvKind::Driving;
  throw std::invalid_argument("unknown environment '" + std::string(name) +
                              "' (expected grab or driving)");
}

std::string_view to_string(EnvKind kind) {
  return kind == EnvKind::Driving ? "driving" : "grab";
}

std::unique_ptr<Environment> make_environment(const EnvSpec& spec) {
  if (spec.kind == EnvKind::Grab) {
    return std::make_unique<GrabMilkEnv>(spec.layout, spec.grab_step_cap);
  }
  return std::make_unique<DrivingEnv>(spec.driving);
}

void ExperimentConfig::validate() const {
  if (episodes == 0) throw std::invalid_argument("episodes must be positive");
  if (runs == 0) throw std::invalid_argument("runs must be positive");
  learner.validate();
  if (env.kind == EnvKind::Driving) env.driving.validate();
  if (env.kind == EnvKind::Grab && env.grab_step_cap == 0) {
    throw std::invalid_argument("step_cap must be positive");
  }
  if (shaping) {
    shaping->config.validate();
    if (!shaping->human) throw std::invalid_argument("shaping needs a human policy");
  }
}

RunAggregate aggregate_runs(const std::vector<std::vector<double>>& series) {
  if (series.empty()) throw std::invalid_argument("no runs to aggregate");
  const std::size_t length = series.front().size();
  for (const auto& s : series) {
    if (s.size() != length) {
      throw std::invalid_argument("run series have different lengths");
    }
  }
  RunAggregate agg;
  agg.run_count = series.size();
  agg.mean.resize(length);
  agg.stderr_.resize(length);
  std::vector<double> column(series.size());
  for (std::size_t e = 0; e < length; ++e) {
    for (std::size_t r = 0; r < series.size(); ++r) column[r] = series[r][e];
    agg.mean[e] = mean_of(column);
    agg.stderr_[e] = stderr_of(column, agg.mean[e]);
  }
  return agg;
}

std::size_t ExperimentResult::metric_index(std::string_view name) const {
  for (std::size_t i = 0; i < metric_names.size(); ++i) {
    if (metric_names[i] == name) return i;
  }
  throw std::out_of_range("unknown metric '" + std::string(name) + "'");
}

std::vector<std::string> metric_names(const Environment& env) {
  std::vector<std::string> names = {"reward", "steps"};
  for (const EventMetric& m : env.event_metrics()) names.push_back(m.name);
  return names;
}

RunResult run_single(const ExperimentConfig& cfg, std::uint64_t run_seed) {
  auto env = make_environment(cfg.env);
  const auto events = env->event_metrics();
  Rng rng(run_seed);
  SarsaLearner learner{QTable(env->state_count(), env->action_count()),
                       cfg.learner};
  std::optional<EthicsShaper> shaper;
  if (cfg.shaping) shaper.emplace(cfg.shaping->human, cfg.shaping->config);

  RunResult result;
  result.series.assign(2 + events.size(), std::vector<double>(cfg.episodes));
  EpisodeOptions options;
  options.record_steps = false;
  for (std::size_t e = 0; e < cfg.episodes; ++e) {
    options.epsilon = cfg.learner.epsilon_at(e);
    const EpisodeTrace trace =
        run_episode(*env, learner, shaper ? &*shaper : nullptr, rng, options);
    result.series[0][e] = trace.cumulative_base_reward;
    result.series[1][e] = static_cast<double>(trace.episode_length);
    for (std::size_t k = 0; k < events.size(); ++k) {
      result.series[2 + k][e] =
          static_cast<double>(trace.event_counts[events[k].event]);
    }
  }
  if (cfg.keep_tables) result.final_table = std::move(learner.q);
  return result;
}

ExperimentResult run_experiment_serial(const ExperimentConfig& cfg,
                                       std::uint64_t master_seed) {
  cfg.validate();
  std::vector<RunResult> runs;
  runs.reserve(cfg.runs);
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    runs.push_back(run_single(cfg, derive_seed(master_seed, r)));
  }
  return finish(cfg, std::move(runs));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                std::uint64_t master_seed) {
  cfg.validate();
  std::vector<RunResult> runs(cfg.runs);
  const auto n = static_cast<std::int64_t>(cfg.runs);
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t r = 0; r < n; ++r) {
    try {
      runs[static_cast<std::size_t>(r)] =
          run_single(cfg, derive_seed(master_seed, static_cast<std::uint64_t>(r)));
    } catch (const std::exception& ex) {
#pragma omp critical
      {
        failed = true;
        failure = ex.what();
      }
    }
  }
  if (failed) throw std::runtime_error("run failed: " + failure);
  return finish(cfg, std::move(runs));
}

WindowStat final_window(const ExperimentResult& result, std::string_view metric,
                        std::size_t window) {
  const std::size_t m = result.metric_index(metric);
  std::vector<double> per_run;
  per_run.reserve(result.runs.size());
  for (const RunResult& r : result.runs) {
    const auto& s = r.series[m];
    if (window == 0 || window > s.size()) {
      throw std::invalid_argument("final window larger than the series");
    }
    double total = 0.0;
    for (std::size_t e = s.size() - window; e < s.size(); ++e) total += s[e];
    per_run.push_back(total / static_cast<double>(window));
  }
  const double mean = mean_of(per_run);
  return {mean, stderr_of(per_run, mean)};
}

}  // namespace ethics
