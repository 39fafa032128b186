#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace ethics {

/// Dense index of an environment state, `0 <= index < state_count`.
struct StateId {
  std::size_t index = 0;
  friend bool operator==(StateId, StateId) = default;
  friend auto operator<=>(StateId, StateId) = default;
};

/// Dense index of an action, `0 <= index < action_count`.
struct ActionId {
  std::size_t index = 0;
  friend bool operator==(ActionId, ActionId) = default;
  friend auto operator<=>(ActionId, ActionId) = default;
};

enum class EnvEvent : std::uint8_t {
  BabyCrossed,
  BabySoothed,
  Collision,
  CatHit,
  ElderRescued,
  MilkReached,
};

inline constexpr std::size_t kEnvEventCount = 6;

std::string_view to_string(EnvEvent event);

/// Small fixed set of events, one bit per kind.
class EventSet {
 public:
  void insert(EnvEvent e) { bits_ |= bit(e); }
  bool contains(EnvEvent e) const { return (bits_ & bit(e)) != 0; }
  bool empty() const { return bits_ == 0; }
  friend bool operator==(EventSet, EventSet) = default;

 private:
  static std::uint8_t bit(EnvEvent e) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(e));
  }
  std::uint8_t bits_ = 0;
};

/// Per-episode event counters indexed by EnvEvent.
struct EventCounts {
  std::array<std::int64_t, kEnvEventCount> counts{};

  std::int64_t operator[](EnvEvent e) const {
    return counts[static_cast<std::size_t>(e)];
  }
  std::int64_t& operator[](EnvEvent e) {
    return counts[static_cast<std::size_t>(e)];
  }
  friend bool operator==(const EventCounts&, const EventCounts&) = default;
};

}  // namespace ethics
