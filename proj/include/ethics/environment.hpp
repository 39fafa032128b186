#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "ethics/rng.hpp"
#include "ethics/types.hpp"

namespace ethics {

struct StepOutcome {
  StateId next_state;
  double reward = 0.0;
  EventSet events;
  bool terminal = false;
};

/// A named per-episode metric backed by an event counter.
struct EventMetric {
  std::string name;
  EnvEvent event;
};

/// Discrete episodic environment. Instances are owned by a single run.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::size_t state_count() const = 0;
  virtual std::size_t action_count() const = 0;
  /// Episodes are truncated after this many steps.
  virtual std::size_t step_cap() const = 0;

  virtual StateId reset(Rng& rng) = 0;
  /// Throws std::out_of_range for an invalid action.
  virtual StepOutcome step(ActionId action, Rng& rng) = 0;

  /// Event counters reported as metrics, in CSV emission order.
  virtual std::vector<EventMetric> event_metrics() const = 0;

  virtual std::unique_ptr<Environment> clone() const = 0;
};

}  // namespace ethics
