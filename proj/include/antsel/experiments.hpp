// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "antsel/capacity.hpp"
#include "antsel/channel.hpp"
#include "antsel/config.hpp"
#include "antsel/geometry.hpp"
#include "antsel/selection.hpp"

namespace antsel {

enum class Algorithm { kLocal, kGreedyForward, kGreedyBackward, kRandom };

std::string to_string(Algorithm a);

struct RunResult {
  std::string algorithm;
  PowerControl power_control = PowerControl::kA;
  std::size_t n_users = 0;
  std::optional<std::size_t> k;
  std::string policy;
  std::size_t n_selected = 0;
  double capacity_eq = 0.0;
  double zf_rate = 0.0;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
};

struct RunFailure {
  std::string run;
  std::string message;
};

struct ResultTable {
  std::vector<RunResult> rows;
  std::vector<RunFailure> failures;

  void append(const ResultTable& other);
};

/// Geometry and normalized channel for one user count of a config.
struct Scenario {
  ScenarioGeometry geometry;
  ChannelTensor tensor;
};

Scenario build_scenario(const ScenarioConfig& config, std::size_t n_users);

/// Mean over `replication` uniformly random n_ts-subsets, scored on all
/// subcarriers. `base_index` separates independent families of draws.
struct RandomBaseline {
  double capacity_eq = 0.0;
  double zf_rate = 0.0;
  std::uint64_t first_seed = 0;
};
RandomBaseline random_baseline(const ChannelTensor& tensor, std::size_t n_ts,
                               const ScenarioConfig& config, std::size_t n_users);

std::uint64_t local_seed(const ScenarioConfig& config, std::size_t n_users, std::size_t k,
                         std::size_t index);

// Rate versus selected-count study. Greedy and random rows cover every
// N_TS in 1..N_T; local rows are one per (k, seed) at the emergent N_TS.
ResultTable sweep_selected_count(const ScenarioConfig& config,
                                 const std::set<Algorithm>& algorithms);

struct NeighborhoodRow {
  std::size_t n_users = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t n_selected = 0;
  double capacity_eq = 0.0;
  double zf_rate = 0.0;
  /// Popcount of the flag vector after every iteration.
  std::vector<std::size_t> size_trace;
};

struct NeighborhoodStudy {
  ResultTable table;
  std::vector<NeighborhoodRow> rows;
};

NeighborhoodStudy sweep_neighborhood(const ScenarioConfig& config,
                                     std::span<const std::size_t> k_grid);

struct PolicyRow {
  std::string policy;
  std::size_t n_users = 0;
  std::optional<std::size_t> k;
  std::uint64_t seed = 0;
  std::size_t n_selected = 0;
  double zf_rate = 0.0;
  double random_mean_zf = 0.0;
  double delta_vs_random = 0.0;
  double wall_time_ms = 0.0;
};

struct PolicyComparison {
  ResultTable table;
  std::vector<PolicyRow> rows;
};

/// Local selection with full, random-fraction and strongest-count policies
/// plus greedy forward, each against the random mean at the same N_TS.
PolicyComparison compare_subcarrier_policies(const ScenarioConfig& config);

struct RobustnessRow {
  std::size_t n_users = 0;
  std::size_t k = 0;
  std::uint64_t local_seed = 0;
  std::uint64_t perturbation_seed = 0;
  std::size_t n_clean = 0;
  std::size_t n_perturbed = 0;
  /// Both scored on the true channel.
  double zf_clean = 0.0;
  double zf_perturbed = 0.0;
};

struct RobustnessStudy {
  ResultTable table;
  std::vector<RobustnessRow> rows;
};

/// Select on perturbed CSI, score on the true channel, next to the selection
/// made on clean CSI. One pair per (k, seed index).
RobustnessStudy csi_robustness(const ScenarioConfig& config, double magnitude,
                               std::size_t n_seeds);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace antsel
