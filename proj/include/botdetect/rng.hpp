#pragma once

#include <cstdint>
#include <random>

namespace botdetect {

/// Seedable generator used by the simulator and the DCA engine.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distribution helpers below are written out by hand because
/// the standard library distributions are implementation-defined, and runs
/// must reproduce on any toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix(seed ^ mix(stream))) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Exponential with the given mean; always > 0.
  double exponential(double mean);

  bool bernoulli(double p) { return uniform01() < p; }

  /// splitmix64 finaliser; spreads small consecutive seeds apart.
  static std::uint64_t mix(std::uint64_t x);

 private:
  std::mt19937_64 engine_;
};

}  // namespace botdetect
