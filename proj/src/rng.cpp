// SPDX-License-Identifier: Apache-2.0
#include "antsel/rng.hpp"

#include <numeric>

namespace antsel {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, SeedTag tag, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ static_cast<std::uint64_t>(tag)) ^ index);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Accept only draws below the largest multiple of n.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    const std::uint64_t x = next();
    if (x < limit) return x % n;
  }
}

std::vector<std::size_t> Rng::sample(std::size_t n, std::size_t m) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + below(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  return pool;
}

}  // namespace antsel
