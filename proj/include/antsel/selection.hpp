// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "antsel/capacity.hpp"
#include "antsel/channel.hpp"
#include "antsel/geometry.hpp"
#include "antsel/rng.hpp"

namespace antsel {

/// neighbors[i] holds the k antennas nearest to i (i excluded), nearest
/// first, equal distances broken by lower index.
struct NeighborhoodTable {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> neighbors;
};

NeighborhoodTable build_neighborhoods(std::span<const Point3> tx_positions, std::size_t k);

/// Which subcarriers the local decisions are evaluated on.
struct SubcarrierPolicy {
  enum class Kind { kFull, kRandomFraction, kStrongest };

  Kind kind = Kind::kFull;
  double fraction = 0.05;
  std::size_t count = 60;

  static SubcarrierPolicy full() { return {}; }
  static SubcarrierPolicy random_fraction(double f) { return {Kind::kRandomFraction, f, 0}; }
  static SubcarrierPolicy strongest(std::size_t m) { return {Kind::kStrongest, 0.0, m}; }

  /// "full", "random-<n>" or "strongest-<n>" for a grid of `total` subcarriers.
  std::string label(std::size_t total) const;
};

struct LocalParams {
  std::size_t k = 8;
  double p_mutation = 0.0;
  std::size_t iterations = 30;
  std::size_t n_init = 0;
  SubcarrierPolicy subcarrier_policy;
  std::uint64_t seed = 0;
  /// When set, antenna i only accounts for users within this distance.
  std::optional<double> user_radius;

  /// p_M = 1/N_T, n_init = floor(N_T/2), N_i = 30.
  static LocalParams defaults(std::size_t n_tx, std::size_t k, std::uint64_t seed);
  void validate(std::size_t n_tx) const;
};

struct LocalIteration {
  SelectionMask flags;
  double score = 0.0;
  std::vector<std::size_t> mutated;
};

struct LocalRunTrace {
  std::vector<LocalIteration> iterations;
  std::size_t best_iteration = 0;
  SelectionMask committed;
};

/// Per-antenna user lists for the optional radius filter. Empty result
/// means "all users" is in effect.
std::vector<std::vector<std::size_t>> users_within_radius(const ScenarioGeometry& geometry,
                                                          double radius);

struct LocalStepResult {
  SelectionMask flags;
  std::vector<std::size_t> mutated;
};

/// One synchronous update: every antenna compares the control-B capacity of
/// its on-neighbours with and without itself, proposes on iff strictly
/// better, then a mutation draw per antenna (ascending order) inverts the
/// proposal with probability p_mutation.
LocalStepResult local_step(const ChannelTensor& tensor, const SelectionMask& flags,
                           const NeighborhoodTable& table, double rho,
                           std::span<const std::size_t> subcarriers, double p_mutation,
                           Rng& rng,
                           const std::vector<std::vector<std::size_t>>* user_subsets = nullptr);

/// Serial-kernel variant of local_step, kept as the reference.
LocalStepResult local_step_serial(const ChannelTensor& tensor, const SelectionMask& flags,
                                  const NeighborhoodTable& table, double rho,
                                  std::span<const std::size_t> subcarriers,
                                  double p_mutation, Rng& rng,
                                  const std::vector<std::vector<std::size_t>>* user_subsets =
                                      nullptr);

/// Runs N_i local steps from n_init random flags and commits the iteration
/// with the highest global equal-power capacity (earliest on ties).
/// `geometry` is needed only when params.user_radius is set.
LocalRunTrace local_select(const ChannelTensor& tensor, const NeighborhoodTable& table,
                           const LocalParams& params, double rho,
                           PowerControl control_for_scoring,
                           const ScenarioGeometry* geometry = nullptr);

/// Order in which greedy forward selection adds antennas, `n_target` long.
std::vector<std::size_t> greedy_forward_path(const ChannelTensor& tensor,
                                             std::size_t n_target, double rho,
                                             PowerControl control,
                                             std::span<const std::size_t> subcarriers);

/// Order in which greedy backward selection removes antennas,
/// N_T - n_target long.
std::vector<std::size_t> greedy_backward_path(const ChannelTensor& tensor,
                                              std::size_t n_target, double rho,
                                              PowerControl control,
                                              std::span<const std::size_t> subcarriers);

SelectionMask greedy_forward(const ChannelTensor& tensor, std::size_t n_target, double rho,
                             PowerControl control, std::span<const std::size_t> subcarriers);

SelectionMask greedy_backward(const ChannelTensor& tensor, std::size_t n_target, double rho,
                              PowerControl control, std::span<const std::size_t> subcarriers);

SelectionMask random_select(std::size_t n_target, std::size_t n_total, std::uint64_t seed);

}  // namespace antsel
