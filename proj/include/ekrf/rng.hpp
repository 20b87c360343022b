#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace ekrf {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic 64-bit stream (mt19937_64) with platform-independent
/// bounded draws. `position()` counts raw 64-bit words consumed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Per-trial seed: seed_base XOR mix64(trial_index).
  static std::uint64_t derive_seed(std::uint64_t seed_base, std::uint64_t trial_index) {
    return seed_base ^ mix64(trial_index);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

  std::uint64_t next_u64() {
    ++position_;
    return engine_();
  }
  /// Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// Uniform big integer in [0, bound); bound > 0.
  mpz_class below(const mpz_class& bound);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t position_ = 0;
};

}  // namespace ekrf
