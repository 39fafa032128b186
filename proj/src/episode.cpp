#include "ethics/episode.hpp"

#include <stdexcept>

namespace ethics {

namespace {

void tally(EpisodeTrace& trace, const EventSet& events) {
  for (std::size_t k = 0; k < kEnvEventCount; ++k) {
    const auto e = static_cast<EnvEvent>(k);
    if (events.contains(e)) trace.event_counts[e] += 1;
  }
}

}  // namespace

EpisodeTrace run_episode(Environment& env, SarsaLearner& learner,
                         const EthicsShaper* shaper, Rng& rng,
                         const EpisodeOptions& options) {
  QTable& q = learner.q;
  const LearnerConfig& cfg = learner.config;
  if (q.action_count() != env.action_count() ||
      q.state_count() != env.state_count()) {
    throw std::invalid_argument("learner and environment dimensions differ");
  }
  if (shaper && (shaper->human().state_count() != env.state_count() ||
                 shaper->human().action_count() != env.action_count())) {
    throw std::invalid_argument("human policy and environment dimensions differ");
  }

  EpisodeTrace trace;
  StateId s = env.reset(rng);
  ActionId a = select_action(q.row(s), options.epsilon, rng);
  const std::size_t cap = env.step_cap();
  for (std::size_t t = 0; t < cap; ++t) {
    const StepOutcome out = env.step(a, rng);
    double shaping = 0.0;
    if (shaper) {
      shaping = shaper->reward(s, a, boltzmann_distribution(q.row(s),
                                                            cfg.temperature));
    }
    const double total = combine(out.reward, shaping);

    trace.cumulative_base_reward += out.reward;
    trace.cumulative_shaping_reward += shaping;
    trace.episode_length += 1;
    tally(trace, out.events);
    if (options.record_steps) {
      trace.steps.push_back({s, a, out.reward, shaping, out.next_state,
                             out.events});
    }

    if (out.terminal) {
      if (options.learn) sarsa_terminal_update(q, s, a, total, cfg.alpha);
      trace.reached_terminal = true;
      break;
    }
    const ActionId a_next = select_action(q.row(out.next_state),
                                          options.epsilon, rng);
    if (options.learn) {
      sarsa_update(q, s, a, total, out.next_state, a_next, cfg.alpha,
                   cfg.gamma);
    }
    s = out.next_state;
    a = a_next;
  }
  return trace;
}

}  // namespace ethics
