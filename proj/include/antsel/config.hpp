// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "antsel/capacity.hpp"
#include "antsel/channel.hpp"
#include "antsel/geometry.hpp"
#include "antsel/selection.hpp"

namespace antsel {

inline constexpr int kConfigVersion = 1;

struct LocalConfig {
  std::vector<std::size_t> k_grid{8, 16, 32};
  std::optional<double> p_mutation;  // default 1/N_T
  std::size_t iterations = 30;
  std::optional<std::size_t> n_init;  // default floor(N_T/2)
  std::size_t seeds = 1;
  std::optional<double> user_radius;
  SubcarrierPolicy policy;
};

struct ScenarioConfig {
  ScenarioParams scenario;
  CarrierGrid carrier;
  double snr_db = -5.0;
  PowerControl power_control = PowerControl::kA;
  std::vector<std::size_t> user_counts{8};
  std::uint64_t master_seed = 1;
  std::size_t replication = 20;
  LocalConfig local;
  double subcarrier_fraction = 0.05;
  std::size_t strongest_count = 60;
  double perturbation_magnitude = 0.3;
  std::size_t perturbation_seeds = 10;
  std::string experiment = "sweep";

  double rho() const { return db_to_linear(snr_db); }
  /// Local parameters for one run on an N_T-antenna scenario.
  LocalParams local_params(std::size_t k, std::uint64_t seed) const;
  void validate() const;
};

/// Parses a versioned config document. Unknown keys and a missing or
/// unsupported "version" are rejected with FormatError.
ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& c);
ScenarioConfig load_config(const std::string& path);

}  // namespace antsel
