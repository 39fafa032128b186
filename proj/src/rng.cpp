#include "ethics/rng.hpp"

#include <limits>

#include "ethics/types.hpp"

namespace ethics {

std::uint64_t Rng::index(std::uint64_t n) {
  // Rejection sampling on the top of the range removes modulo bias.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  return mix64(master ^ mix64(counter + 1));
}

std::string_view to_string(EnvEvent event) {
  switch (event) {
    case EnvEvent::BabyCrossed: return "baby_crossed";
    case EnvEvent::BabySoothed: return "baby_soothed";
    case EnvEvent::Collision: return "collision";
    case EnvEvent::CatHit: return "cat_hit";
    case EnvEvent::ElderRescued: return "elder_rescued";
    case EnvEvent::MilkReached: return "milk_reached";
  }
  return "unknown";
}

}  // namespace ethics
