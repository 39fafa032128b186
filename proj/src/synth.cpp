#include "ethics/synth.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ethics {

namespace {

ActionId pick(const std::vector<std::size_t>& actions, Rng& rng) {
  return ActionId{actions[static_cast<std::size_t>(rng.index(actions.size()))]};
}

}  // namespace

ActionId grab_human_action(const GrabLayout& layout, Cell at,
                           const std::vector<char>& soothed,
                           const GrabHumanRules& rules, Rng& rng,
                           bool* fell_back) {
  std::vector<std::size_t> crying;
  std::vector<std::size_t> quiet;
  std::vector<std::size_t> other;
  for (std::size_t a = 0; a < kGrabActionCount; ++a) {
    const Cell t = move_target(at, ActionId{a});
    const CellKind k = layout.in_bounds(t) ? layout.kind(t) : CellKind::Empty;
    if (k == CellKind::CryingBaby && !soothed[layout.index(t)]) {
      crying.push_back(a);
    } else if (k == CellKind::Baby) {
      quiet.push_back(a);
    } else {
      other.push_back(a);
    }
  }
  if (fell_back) *fell_back = false;
  if (!crying.empty() && rng.bernoulli(rules.comfort_prob)) {
    return pick(crying, rng);
  }
  // From here on crying babies are passed over.
  std::vector<std::size_t> candidates;
  if (!quiet.empty()) {
    candidates = rng.bernoulli(rules.avoid_prob) ? other : quiet;
  } else {
    candidates = other;
  }
  if (candidates.empty()) {
    if (fell_back) *fell_back = true;
    return ActionId{static_cast<std::size_t>(rng.index(kGrabActionCount))};
  }
  return pick(candidates, rng);
}

HumanDataset synth_grab(const GrabLayout& layout, std::size_t n_trajectories,
                        Rng& rng, const GrabHumanRules& rules,
                        SynthStats* stats) {
  if (n_trajectories == 0) {
    throw std::invalid_argument("number of trajectories must be positive");
  }
  std::vector<Cell> starts;
  for (std::size_t i = 0; i < layout.cell_count(); ++i) {
    const Cell c = layout.cell(i);
    if (layout.kind(c) == CellKind::Empty) starts.push_back(c);
  }
  if (starts.empty()) throw std::invalid_argument("layout has no free cell");

  HumanDataset dataset{layout.cell_count(), kGrabActionCount, {}};
  dataset.pairs.reserve(n_trajectories * rules.trajectory_length);
  GrabMilkEnv env(layout, rules.trajectory_length);
  std::vector<char> soothed(layout.cell_count(), 0);
  std::size_t fallbacks = 0;
  for (std::size_t n = 0; n < n_trajectories; ++n) {
    std::fill(soothed.begin(), soothed.end(), 0);
    env.reset(rng);
    env.set_position(starts[static_cast<std::size_t>(rng.index(starts.size()))]);
    for (std::size_t t = 0; t < rules.trajectory_length; ++t) {
      const Cell at = env.position();
      bool fell_back = false;
      const ActionId a = grab_human_action(layout, at, soothed, rules, rng, &fell_back);
      fallbacks += fell_back ? 1 : 0;
      dataset.pairs.push_back({env.state_of(at), a});
      env.step(a, rng);
      const Cell now = env.position();
      if (layout.kind(now) == CellKind::CryingBaby) soothed[layout.index(now)] = 1;
    }
  }
  if (stats) {
    stats->trajectories += n_trajectories;
    stats->fallbacks += fallbacks;
  }
  return dataset;
}

ActionId driving_human_action(const DrivingWorld& world,
                              const DrivingConfig& cfg,
                              const DrivingHumanRules& rules, Rng& rng) {
  if (rng.bernoulli(rules.noise)) {
    return ActionId{static_cast<std::size_t>(rng.index(kDrivingActionCount))};
  }
  const bool rescue = cfg.variant == DrivingVariant::Rescue;
  // Lexicographic score, larger is better.
  std::array<int, kDrivingActionCount> score{};
  for (std::size_t a = 0; a < kDrivingActionCount; ++a) {
    const ActionId action{a};
    const LaneThreat threat = lane_threat(world, cfg, steer(world.ego_lane, action));
    const int hazard_term = rescue ? (threat.hazard ? 1 : 0) : (threat.hazard ? 0 : 1);
    const int collision_term = threat.collision ? 0 : 1;
    const int straight_term =
        a == static_cast<std::size_t>(DrivingAction::Straight) ? 1 : 0;
    score[a] = hazard_term * 4 + collision_term * 2 + straight_term;
  }
  const int best = *std::max_element(score.begin(), score.end());
  std::vector<std::size_t> ties;
  for (std::size_t a = 0; a < kDrivingActionCount; ++a) {
    if (score[a] == best) ties.push_back(a);
  }
  return pick(ties, rng);
}

HumanDataset synth_driving(const DrivingConfig& cfg, std::size_t n_episodes,
                           Rng& rng, const DrivingHumanRules& rules,
                           SynthStats* stats) {
  if (n_episodes == 0) throw std::invalid_argument("number of episodes must be positive");
  DrivingEnv env(cfg);
  HumanDataset dataset{kDrivingStateCount, kDrivingActionCount, {}};
  dataset.pairs.reserve(n_episodes * cfg.horizon);
  for (std::size_t n = 0; n < n_episodes; ++n) {
    StateId s = env.reset(rng);
    for (std::size_t t = 0; t < cfg.horizon; ++t) {
      const ActionId a = driving_human_action(env.world(), cfg, rules, rng);
      dataset.pairs.push_back({s, a});
      s = env.step(a, rng).next_state;
    }
  }
  if (stats) stats->trajectories += n_episodes;
  return dataset;
}

}  // namespace ethics
