#pragma once

#include <cstdint>
#include <random>

namespace abpl {

/// Seeded generator with platform-independent draws. The standard
/// distributions are implementation-defined, so traces would differ between
/// standard libraries; these helpers only use the raw 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound), unbiased (rejection sampling).
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1].
  double unit_open_closed() { return 1.0 - unit(); }

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a base seed (splitmix64 step).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace abpl
