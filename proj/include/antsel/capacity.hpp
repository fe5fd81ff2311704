// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "antsel/channel.hpp"

namespace antsel {

/// A: f = rho * N_R (array gain raises user SNR).
/// B: f = rho * N_R / N_TS (array gain lowers transmit power).
enum class PowerControl { kA, kB };

std::string to_string(PowerControl pc);
PowerControl power_control_from_string(const std::string& s);

enum class Metric { kEqualPower, kZfWaterfilling };

/// ZF is treated as infeasible above this Gram condition number.
inline constexpr double kZfConditionLimit = 1e12;

/// On/off state over the N_T transmit antennas.
class SelectionMask {
 public:
  SelectionMask() = default;
  explicit SelectionMask(std::size_t n_total) : bits_(n_total, 0) {}
  static SelectionMask all(std::size_t n_total);
  static SelectionMask from_indices(std::size_t n_total, std::span<const std::size_t> on);

  std::size_t size() const { return bits_.size(); }
  std::size_t count() const;
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool on) { bits_[i] = on ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }

  /// Indices of the on antennas, ascending.
  std::vector<std::size_t> indices() const;
  /// "0101..." in antenna order.
  std::string to_string() const;

  friend bool operator==(const SelectionMask&, const SelectionMask&) = default;
  friend auto operator<=>(const SelectionMask&, const SelectionMask&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct CapacityReport {
  double equal_power_capacity = 0.0;
  double zf_waterfilling_rate = 0.0;
  std::size_t n_selected = 0;
  PowerControl power_control = PowerControl::kA;
  std::vector<std::size_t> subcarrier_indices;
};

double power_factor(PowerControl control, double rho, std::size_t n_ts, std::size_t n_r);

/// log2 det(I + scale * gram) for a Hermitian positive semidefinite gram.
double log2det_identity_plus(const Eigen::MatrixXcd& gram, double scale);

/// Equal-power sum capacity from the N_R x N_R Gram matrix H H^H.
double capacity_from_gram(const Eigen::MatrixXcd& gram, double f);

/// ZF water-filling rate from the Gram matrix of `n_ts` selected columns.
double zf_rate_from_gram(const Eigen::MatrixXcd& gram, std::size_t n_ts, double f);

/// log2 det(I + (f / N_R) H H^H) for one subcarrier, H of shape N_R x N_TS.
double sum_capacity_equal_power(const Eigen::MatrixXcd& h_sub, double f);

/// Exact active-set water filling: p_k = max(0, mu - 1/g_k), sum p = budget.
std::vector<double> waterfill(std::span<const double> gains, double budget);

double zf_waterfilling_rate(const Eigen::MatrixXcd& h_sub, double f);

/// H H^H over the listed columns of one subcarrier, summed in list order.
/// `users` restricts the rows; empty means all users.
void gram_of_columns(const ChannelTensor& tensor, std::size_t sc,
                     std::span<const std::size_t> columns,
                     std::span<const std::size_t> users, Eigen::MatrixXcd& gram);

/// gram += h h^H for one antenna column (restricted to `users` if nonempty).
void add_outer(const ChannelTensor& tensor, std::size_t sc, std::size_t tx,
               std::span<const std::size_t> users, double sign, Eigen::MatrixXcd& gram);

double metric_from_gram(Metric metric, const Eigen::MatrixXcd& gram, std::size_t n_ts,
                        double f);

/// Mean over `subcarriers` of the per-subcarrier metric on the masked
/// columns, f = power_factor(control, rho, N_TS, N_R). Accumulated in
/// ascending subcarrier order.
double score_selection(const ChannelTensor& tensor, const SelectionMask& mask,
                       PowerControl control, double rho,
                       std::span<const std::size_t> subcarriers, Metric metric);

CapacityReport evaluate_selection(const ChannelTensor& tensor, const SelectionMask& mask,
                                  PowerControl control, double rho,
                                  std::span<const std::size_t> subcarriers);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace antsel
