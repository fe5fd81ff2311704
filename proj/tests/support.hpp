// SPDX-License-Identifier: Apache-2.0
#pragma once

// Test helpers: seeded random channels and small hand-built tensors.

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "antsel/channel.hpp"
#include "antsel/rng.hpp"

namespace antsel::test {

inline cplx gaussian(Rng& rng) {
  // Box-Muller, unit variance per complex entry.
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  const double r = std::sqrt(-std::log(u1));
  return std::polar(r, 2.0 * 3.14159265358979323846 * u2);
}

inline Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gaussian(rng);
  return m;
}

inline ChannelTensor random_tensor(std::size_t n_users, std::size_t n_tx, std::size_t n_sc,
                                   std::uint64_t seed) {
  Rng rng(seed);
  ChannelTensor t(n_users, n_tx, n_sc);
  for (std::size_t r = 0; r < n_users; ++r)
    for (std::size_t a = 0; a < n_tx; ++a)
      for (std::size_t s = 0; s < n_sc; ++s) t.at(r, a, s) = gaussian(rng);
  return t;
}

/// Random channel with a spread of per-antenna strengths, closer to the
/// near/far structure of distributed arrays than an i.i.d. draw.
inline ChannelTensor random_distributed_tensor(std::size_t n_users, std::size_t n_tx,
                                               std::size_t n_sc, std::uint64_t seed) {
  ChannelTensor t = random_tensor(n_users, n_tx, n_sc, seed);
  Rng rng(seed ^ 0x5eedULL);
  for (std::size_t r = 0; r < n_users; ++r)
    for (std::size_t a = 0; a < n_tx; ++a) {
      const double gain = std::pow(10.0, rng.uniform(-1.5, 1.5));
      for (std::size_t s = 0; s < n_sc; ++s) t.at(r, a, s) *= gain;
    }
  return t;
}

inline Eigen::MatrixXcd columns_of(const ChannelTensor& t, std::size_t sc,
                                   const std::vector<std::size_t>& cols) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(t.n_users()),
                     static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t r = 0; r < t.n_users(); ++r)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = t.at(r, cols[j], sc);
  return m;
}

}  // namespace antsel::test
