// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "antsel/geometry.hpp"

namespace antsel {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;

struct CarrierGrid {
  double carrier_hz = 2.6e9;
  double bandwidth_hz = 20e6;
  std::size_t n_subcarriers = 300;

  void validate() const;
  /// Uniformly spaced, centred on the carrier, spanning the bandwidth.
  /// A single subcarrier sits on the carrier.
  std::vector<double> frequencies() const;
};

/// Complex gains indexed (user, antenna, subcarrier).
///
/// Storage is subcarrier-major with each per-subcarrier N_R x N_T slice in
/// column-major order, so an antenna's column on one subcarrier is a
/// contiguous run of N_R values. This is an in-memory detail; the file
/// format orders entries (user, antenna, subcarrier) row-major.
class ChannelTensor {
 public:
  ChannelTensor() = default;
  ChannelTensor(std::size_t n_users, std::size_t n_tx, std::size_t n_subcarriers);

  std::size_t n_users() const { return n_users_; }
  std::size_t n_tx() const { return n_tx_; }
  std::size_t n_subcarriers() const { return n_subcarriers_; }
  bool normalized() const { return normalized_; }
  void set_normalized(bool v) { normalized_ = v; }

  cplx& at(std::size_t user, std::size_t tx, std::size_t sc) {
    return data_[offset(user, tx, sc)];
  }
  const cplx& at(std::size_t user, std::size_t tx, std::size_t sc) const {
    return data_[offset(user, tx, sc)];
  }

  /// Channel from antenna `tx` to all users on subcarrier `sc`.
  std::span<const cplx> column(std::size_t sc, std::size_t tx) const {
    return {data_.data() + offset(0, tx, sc), n_users_};
  }
  std::span<cplx> column(std::size_t sc, std::size_t tx) {
    return {data_.data() + offset(0, tx, sc), n_users_};
  }

  Eigen::Map<const Eigen::MatrixXcd> slice(std::size_t sc) const {
    return {data_.data() + sc * n_users_ * n_tx_, static_cast<Eigen::Index>(n_users_),
            static_cast<Eigen::Index>(n_tx_)};
  }

  std::span<const cplx> entries() const { return data_; }
  std::span<cplx> entries() { return data_; }

  double mean_power() const;

  friend bool operator==(const ChannelTensor&, const ChannelTensor&) = default;

 private:
  std::size_t offset(std::size_t user, std::size_t tx, std::size_t sc) const {
    return (sc * n_tx_ + tx) * n_users_ + user;
  }

  std::size_t n_users_ = 0;
  std::size_t n_tx_ = 0;
  std::size_t n_subcarriers_ = 0;
  bool normalized_ = false;
  std::vector<cplx> data_;
};

struct PerturbationSpec {
  double relative_magnitude = 0.3;
  std::uint64_t seed = 0;

  void validate() const;
};

/// LOS plus one single-bounce path per scatterer; the obstacle blocks any
/// segment touching it. Paths are summed LOS first, then by scatterer index.
ChannelTensor synthesize_channel(const ScenarioGeometry& geometry, const CarrierGrid& grid);

/// Scales by one real constant so that the mean |h|^2 is 1.
ChannelTensor normalize_csi(const ChannelTensor& tensor);

/// Multiplies each entry by (1 + u), u ~ U[-m, m] drawn per entry in storage
/// order (user, antenna, subcarrier) row-major. Not re-normalized.
ChannelTensor perturb_csi(const ChannelTensor& tensor, const PerturbationSpec& spec);

/// round(fraction * total) distinct indices, uniformly without replacement,
/// returned in ascending order.
std::vector<std::size_t> select_subcarriers_random(std::size_t total, double fraction,
                                                   std::uint64_t seed);

/// Indices of the `count` subcarriers with highest mean |h|^2 over
/// (user, antenna), strongest first, ties to the lower index.
std::vector<std::size_t> select_subcarriers_strongest(const ChannelTensor& tensor,
                                                      std::size_t count);

std::vector<std::size_t> all_subcarriers(const ChannelTensor& tensor);

// Binary interchange format: five little-endian u32 (magic, version, N_R,
// N_T, c) followed by N_R*N_T*c little-endian f64 (re, im) pairs ordered
// (user, antenna, subcarrier) row-major.
inline constexpr std::uint32_t kTensorMagic = 0x48435341;  // "ASCH"
inline constexpr std::uint32_t kTensorVersion = 1;

void write_tensor(std::ostream& os, const ChannelTensor& tensor);
ChannelTensor read_tensor(std::istream& is);
void write_tensor_file(const std::string& path, const ChannelTensor& tensor);
ChannelTensor read_tensor_file(const std::string& path);

}  // namespace antsel
