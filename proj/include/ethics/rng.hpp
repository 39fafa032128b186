#pragma once

#include <cstdint>
#include <random>

namespace ethics {

/// 64-bit Mersenne Twister with explicit, library-independent sampling
/// helpers so that streams are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Requires n > 0.
  std::uint64_t index(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based seed split: the seed of stream `counter` derived from
/// `master` is mix64(master ^ mix64(counter + 1)). Streams never
/// depend on how many other streams exist.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

}  // namespace ethics
