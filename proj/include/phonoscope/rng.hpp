#pragma once

#include <cstdint>

namespace phonoscope {

/// Counter-based pseudo-random generator (splitmix64 finalizer over a
/// keyed counter). Stateless: value(i) depends only on (key, i), so any
/// draw can be computed independently and results do not depend on worker
/// scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t bits(std::uint64_t counter) const;

  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const;

  /// Uniform integer in [0, bound); bound > 0. Uses 64-bit multiply-shift.
  std::uint64_t below(std::uint64_t counter, std::uint64_t bound) const;

  /// Derives an independent stream key, e.g. one per utterance.
  std::uint64_t derive_key(std::uint64_t stream) const;

 private:
  std::uint64_t key_;
};

}  // namespace phonoscope
