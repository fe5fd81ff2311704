// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace antsel {

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Run kinds used to separate seed streams derived from one master seed.
enum class SeedTag : std::uint64_t {
  kGeometry = 1,
  kLocal = 2,
  kRandomSelect = 3,
  kPerturbation = 4,
};

/// Child seed for run `index` of kind `tag`:
///   splitmix64(splitmix64(splitmix64(master) ^ tag) ^ index)
/// Pure function, so runs can be executed in any order.
std::uint64_t derive_seed(std::uint64_t master, SeedTag tag, std::uint64_t index);

/// Seeded stream on top of mt19937_64. Conversions to doubles and bounded
/// integers are done here rather than through <random> distributions so the
/// sequence does not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), rejection sampling (no modulo bias). n > 0.
  std::uint64_t below(std::uint64_t n);

  /// m distinct values of [0, n) in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample(std::size_t n, std::size_t m);

 private:
  std::mt19937_64 engine_;
};

}  // namespace antsel
