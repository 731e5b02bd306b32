#pragma once

#include <cstdint>
#include <random>

namespace qcav {

/// SplitMix64 finalizer. Used to derive decorrelated seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of stream `stream` under `master`. Chains, sweep points and lattice
/// initializers each take their own stream so runs reproduce exactly.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Deterministic generator: std::mt19937_64 seeded with a single 64-bit word.
/// Both the engine and the conversions below are fully specified, so
/// sequences are identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) built from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Unbiased integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace qcav
