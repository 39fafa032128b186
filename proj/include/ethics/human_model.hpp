#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ethics/types.hpp"

namespace ethics {

struct HumanPair {
  StateId state;
  ActionId action;
  friend bool operator==(const HumanPair&, const HumanPair&) = default;
};

/// Ordered human state-action records; a pair's arrival index is its
/// position in `pairs`.
struct HumanDataset {
  std::size_t state_count = 0;
  std::size_t action_count = 0;
  std::vector<HumanPair> pairs;

  void validate() const;
};

/// Rescaling applied to the centered feedback vector of a state.
enum class DeltaScale {
  None,     // centered raw counts
  UnitMax,  // divided by the largest |delta| of the state
  Mean,     // divided by max(mean count, 1)
};

DeltaScale parse_delta_scale(std::string_view name);
std::string_view to_string(DeltaScale scale);

/// Per-state action counts of positive human feedback. With a non-zero
/// window capacity each state keeps a FIFO of its most recent actions and
/// the counts always equal the FIFO contents.
class DeltaTable {
 public:
  DeltaTable(std::size_t state_count, std::size_t action_count,
             std::size_t window_capacity = 0);

  std::size_t state_count() const { return state_count_; }
  std::size_t action_count() const { return action_count_; }
  std::size_t window_capacity() const { return window_capacity_; }
  bool windowed() const { return window_capacity_ > 0; }

  /// Records one pair, evicting the state's oldest pair when the window
  /// is full. Returns true when an eviction happened.
  bool push(StateId s, ActionId a);

  std::span<const std::int64_t> counts(StateId s) const {
    return {counts_.data() + s.index * action_count_, action_count_};
  }
  std::int64_t total(StateId s) const { return totals_[s.index]; }
  bool has_data(StateId s) const { return totals_[s.index] > 0; }
  std::size_t covered_states() const;

  /// FIFO contents of a state, oldest first. Empty when not windowed.
  const std::deque<ActionId>& window(StateId s) const;

  friend bool operator==(const DeltaTable&, const DeltaTable&) = default;

 private:
  void check(StateId s, ActionId a) const;

  std::size_t state_count_;
  std::size_t action_count_;
  std::size_t window_capacity_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> totals_;
  std::vector<std::deque<ActionId>> windows_;
};

/// Counts every pair of the dataset as one positive feedback.
DeltaTable ingest(const HumanDataset& dataset, std::size_t window_capacity = 0);

/// Streams one pair into a windowed table.
void window_push(DeltaTable& delta, HumanPair pair);

/// Counts of `s` minus their mean over actions, then rescaled.
std::vector<double> normalize_zero_mean(const DeltaTable& delta, StateId s,
                                        DeltaScale scale = DeltaScale::None);

/// Binomial integration of feedback: Pr(a) proportional to
/// C^delta[a] * (1-C)^(sum of the other deltas), evaluated in log space.
std::vector<double> integrate_feedback(std::span<const double> delta,
                                       double confidence);

/// softmax(delta * ln(C / (1 - C))). Equal to integrate_feedback whenever
/// delta sums to zero.
std::vector<double> integrate_feedback_softmax(std::span<const double> delta,
                                               double confidence);

void validate_confidence(double confidence);

/// Immutable per-state human action distributions.
class HumanPolicy {
 public:
  HumanPolicy(std::size_t state_count, std::size_t action_count,
              double confidence);

  std::size_t state_count() const { return state_count_; }
  std::size_t action_count() const { return action_count_; }
  double confidence() const { return confidence_; }

  std::span<const double> row(StateId s) const {
    return {probs_.data() + s.index * action_count_, action_count_};
  }
  void set_row(StateId s, std::span<const double> dist);

 private:
  std::size_t state_count_;
  std::size_t action_count_;
  double confidence_;
  std::vector<double> probs_;
};

/// States without data get the uniform distribution.
HumanPolicy human_policy(const DeltaTable& delta, double confidence,
                         DeltaScale scale = DeltaScale::None);

/// Streaming wrapper: a DeltaTable plus a lazily refreshed policy cache.
/// Pushes are O(1); a state's distribution is recomputed on first read
/// after it changed.
class HumanModel {
 public:
  HumanModel(DeltaTable delta, double confidence,
             DeltaScale scale = DeltaScale::None);

  void push(HumanPair pair);
  std::span<const double> policy(StateId s) const;
  const DeltaTable& delta() const { return delta_; }
  HumanPolicy snapshot() const;

 private:
  DeltaTable delta_;
  double confidence_;
  DeltaScale scale_;
  mutable HumanPolicy cache_;
  mutable std::vector<char> dirty_;
};

// Dataset text format: one "state action" pair per line; '#' starts a
// comment, blank lines are skipped.
void write_dataset(std::ostream& out, const HumanDataset& dataset,
                   std::string_view header_comment = {});
HumanDataset read_dataset(std::istream& in, std::size_t state_count,
                          std::size_t action_count);
void save_dataset(const std::string& path, const HumanDataset& dataset,
                  std::string_view header_comment = {});
HumanDataset load_dataset(const std::string& path, std::size_t state_count,
                          std::size_t action_count);

}  // namespace ethics
