#pragma once

#include <cstddef>
#include <cstdint>

#include "ethics/driving.hpp"
#include "ethics/grab_milk.hpp"
#include "ethics/human_model.hpp"
#include "ethics/rng.hpp"

namespace ethics {

struct GrabHumanRules {
  std::size_t trajectory_length = 40;
  /// Probability of stepping onto an adjacent unsoothed crying baby.
  double comfort_prob = 0.95;
  /// Probability of keeping off adjacent quiet babies; otherwise the walker
  /// steps onto one of them.
  double avoid_prob = 0.95;
};

struct DrivingHumanRules {
  /// Probability that a uniform random action replaces the rule's choice.
  double noise = 0.05;
};

struct SynthStats {
  std::size_t trajectories = 0;
  /// Steps where the rules left no action and a uniform one was used.
  std::size_t fallbacks = 0;
};

/// One step of the rule-following walker in the room. `soothed` holds one
/// flag per cell and is updated when a crying baby is entered.
ActionId grab_human_action(const GrabLayout& layout, Cell at,
                           const std::vector<char>& soothed,
                           const GrabHumanRules& rules, Rng& rng,
                           bool* fell_back = nullptr);

/// Goal-free random walks from uniform non-baby starts.
HumanDataset synth_grab(const GrabLayout& layout, std::size_t n_trajectories,
                        Rng& rng, const GrabHumanRules& rules = {},
                        SynthStats* stats = nullptr);

/// Rule-based driver: actions are ranked lexicographically. Avoid: no cat,
/// then no collision, then straight. Rescue: reaches an elder, then no
/// collision, then straight. Ties are broken uniformly.
ActionId driving_human_action(const DrivingWorld& world,
                              const DrivingConfig& cfg,
                              const DrivingHumanRules& rules, Rng& rng);

HumanDataset synth_driving(const DrivingConfig& cfg, std::size_t n_episodes,
                           Rng& rng, const DrivingHumanRules& rules = {},
                           SynthStats* stats = nullptr);

}  // namespace ethics
