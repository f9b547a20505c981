#pragma once

#include <cstdint>

namespace ocreval::synth {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Key for an independent stream, e.g. (seed, spec index, purpose).
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Counter-based generator: draw k of stream `key` is mix64(key + k * phi),
/// so streams are reproducible and independent of evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  /// Standard normal (Box-Muller).
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ocreval::synth
