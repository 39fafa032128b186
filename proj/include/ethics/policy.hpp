#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ethics/rng.hpp"
#include "ethics/types.hpp"

namespace ethics {

/// Dense state x action table of action-value estimates, row-major.
class QTable {
 public:
  QTable(std::size_t state_count, std::size_t action_count, double init = 0.0);

  std::size_t state_count() const { return state_count_; }
  std::size_t action_count() const { return action_count_; }

  double operator()(StateId s, ActionId a) const {
    return values_[s.index * action_count_ + a.index];
  }
  double& operator()(StateId s, ActionId a) {
    return values_[s.index * action_count_ + a.index];
  }

  std::span<const double> row(StateId s) const {
    return {values_.data() + s.index * action_count_, action_count_};
  }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t state_count_;
  std::size_t action_count_;
  std::vector<double> values_;
};

struct LearnerConfig {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon = 0.1;
  /// Exploration rate reached at the end of the linear decay. Equal to
  /// `epsilon` for a constant schedule.
  double epsilon_final = 0.1;
  /// Episodes over which epsilon moves linearly to `epsilon_final`.
  std::size_t epsilon_decay_episodes = 0;
  double temperature = 1.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  /// Exploration rate used during `episode` (0-based).
  double epsilon_at(std::size_t episode) const;
};

/// Softmax of q_row / temperature evaluated with max subtraction.
std::vector<double> boltzmann_distribution(std::span<const double> q_row,
                                           double temperature);

/// Lowest-index argmax.
ActionId argmax_action(std::span<const double> q_row);

/// Epsilon-greedy choice; ties among greedy actions go to the lowest index.
ActionId select_action(std::span<const double> q_row, double epsilon, Rng& rng);

/// Q(s,a) += alpha * (reward + gamma * Q(s',a') - Q(s,a)).
void sarsa_update(QTable& q, StateId s, ActionId a, double reward,
                  StateId s_next, ActionId a_next, double alpha, double gamma);

/// Update toward a terminal transition, whose successor value is zero.
void sarsa_terminal_update(QTable& q, StateId s, ActionId a, double reward,
                           double alpha);

std::vector<ActionId> greedy_policy(const QTable& q);

// Binary Q-table dump: magic "EQTB", u32 version, u64 state count, u64
// action count, then row-major little-endian IEEE doubles.
void write_qtable(std::ostream& out, const QTable& q);
QTable read_qtable(std::istream& in);
void save_qtable(const std::string& path, const QTable& q);
QTable load_qtable(const std::string& path);

}  // namespace ethics
