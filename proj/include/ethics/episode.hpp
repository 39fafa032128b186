#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ethics/environment.hpp"
#include "ethics/policy.hpp"
#include "ethics/rng.hpp"
#include "ethics/shaping.hpp"

namespace ethics {

struct StepRecord {
  StateId state;
  ActionId action;
  double base_reward = 0.0;
  double shaping_reward = 0.0;
  StateId next_state;
  EventSet events;

  double total_reward() const { return base_reward + shaping_reward; }
  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct EpisodeTrace {
  std::vector<StepRecord> steps;
  double cumulative_base_reward = 0.0;
  double cumulative_shaping_reward = 0.0;
  EventCounts event_counts;
  std::size_t episode_length = 0;
  bool reached_terminal = false;

  friend bool operator==(const EpisodeTrace&, const EpisodeTrace&) = default;
};

/// SARSA learner state for one run: the table plus its configuration.
struct SarsaLearner {
  QTable q;
  LearnerConfig config;
};

struct EpisodeOptions {
  double epsilon = 0.0;
  /// When false only the aggregate fields of the trace are filled.
  bool record_steps = true;
  /// When false the table is left untouched (evaluation).
  bool learn = true;
};

/// Runs one episode from env.reset(). The learner's update signal at each
/// step is base reward plus the shaping reward, where the shaping reward
/// is computed from the Boltzmann distribution of the Q row before that
/// step's update.
EpisodeTrace run_episode(Environment& env, SarsaLearner& learner,
                         const EthicsShaper* shaper, Rng& rng,
                         const EpisodeOptions& options);

}  // namespace ethics
