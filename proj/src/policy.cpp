#include "ethics/policy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ethics {

namespace {

constexpr char kQTableMagic[4] = {'E', 'Q', 'T', 'B'};
constexpr std::uint32_t kQTableVersion = 1;

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little,
                "Q-table I/O assumes a little-endian host");
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) {
    throw std::runtime_error("truncated Q-table stream");
  }
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

}  // namespace

QTable::QTable(std::size_t state_count, std::size_t action_count, double init)
    : state_count_(state_count),
      action_count_(action_count),
      values_(state_count * action_count, init) {
  if (state_count == 0 || action_count == 0) {
    throw std::invalid_argument("QTable dimensions must be positive");
  }
  if (!std::isfinite(init)) {
    throw std::invalid_argument("QTable initial value must be finite");
  }
}

void LearnerConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in [0, 1]");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (!(epsilon_final >= 0.0 && epsilon_final <= 1.0)) {
    throw std::invalid_argument("epsilon_final must lie in [0, 1]");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("temperature must be positive");
  }
}

double LearnerConfig::epsilon_at(std::size_t episode) const {
  if (epsilon_decay_episodes == 0 || episode >= epsilon_decay_episodes) {
    return epsilon_decay_episodes == 0 ? epsilon : epsilon_final;
  }
  const double t = static_cast<double>(episode) /
                   static_cast<double>(epsilon_decay_episodes);
  return epsilon + (epsilon_final - epsilon) * t;
}

std::vector<double> boltzmann_distribution(std::span<const double> q_row,
                                           double temperature) {
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("Boltzmann temperature must be positive");
  }
  if (q_row.empty()) {
    throw std::invalid_argument("Boltzmann distribution of an empty row");
  }
  const double top = *std::max_element(q_row.begin(), q_row.end());
  std::vector<double> out(q_row.size());
  double total = 0.0;
  for (std::size_t i = 0; i < q_row.size(); ++i) {
    out[i] = std::exp((q_row[i] - top) / temperature);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

ActionId argmax_action(std::span<const double> q_row) {
  if (q_row.empty()) throw std::invalid_argument("argmax of an empty row");
  std::size_t best = 0;
  for (std::size_t i = 1; i < q_row.size(); ++i) {
    if (q_row[i] > q_row[best]) best = i;
  }
  return ActionId{best};
}

ActionId select_action(std::span<const double> q_row, double epsilon,
                       Rng& rng) {
  if (q_row.empty()) throw std::invalid_argument("select_action on empty row");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (epsilon > 0.0 && rng.uniform() < epsilon) {
    return ActionId{static_cast<std::size_t>(rng.index(q_row.size()))};
  }
  return argmax_action(q_row);
}

void sarsa_update(QTable& q, StateId s, ActionId a, double reward,
                  StateId s_next, ActionId a_next, double alpha, double gamma) {
  if (!std::isfinite(reward)) {
    throw std::invalid_argument("SARSA reward must be finite");
  }
  double& entry = q(s, a);
  entry += alpha * (reward + gamma * q(s_next, a_next) - entry);
}

void sarsa_terminal_update(QTable& q, StateId s, ActionId a, double reward,
                           double alpha) {
  if (!std::isfinite(reward)) {
    throw std::invalid_argument("SARSA reward must be finite");
  }
  double& entry = q(s, a);
  entry += alpha * (reward - entry);
}

std::vector<ActionId> greedy_policy(const QTable& q) {
  std::vector<ActionId> out;
  out.reserve(q.state_count());
  for (std::size_t s = 0; s < q.state_count(); ++s) {
    out.push_back(argmax_action(q.row(StateId{s})));
  }
  return out;
}

void write_qtable(std::ostream& out, const QTable& q) {
  out.write(kQTableMagic, sizeof(kQTableMagic));
  write_le<std::uint32_t>(out, kQTableVersion);
  write_le<std::uint64_t>(out, q.state_count());
  write_le<std::uint64_t>(out, q.action_count());
  for (double v : q.values()) write_le<double>(out, v);
  if (!out) throw std::runtime_error("failed writing Q-table");
}

QTable read_qtable(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kQTableMagic, 4) != 0) {
    throw std::runtime_error("not a Q-table stream (bad magic)");
  }
  const auto version = read_le<std::uint32_t>(in);
  if (version != kQTableVersion) {
    throw std::runtime_error("unsupported Q-table version " +
                             std::to_string(version));
  }
  const auto states = read_le<std::uint64_t>(in);
  const auto actions = read_le<std::uint64_t>(in);
  if (states == 0 || actions == 0 || states > (1ULL << 32) || actions > 1024) {
    throw std::runtime_error("implausible Q-table dimensions");
  }
  QTable q(states, actions);
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t a = 0; a < actions; ++a) {
      const double v = read_le<double>(in);
      if (!std::isfinite(v)) {
        throw std::runtime_error("non-finite value in Q-table");
      }
      q(StateId{s}, ActionId{a}) = v;
    }
  }
  return q;
}

void save_qtable(const std::string& path, const QTable& q) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_qtable(out, q);
}

QTable load_qtable(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_qtable(in);
}

}  // namespace ethics
