// SPDX-License-Identifier: Apache-2.0
#include "antsel/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include "antsel/errors.hpp"

namespace antsel {

LocalParams ScenarioConfig::local_params(std::size_t k, std::uint64_t seed) const {
  const std::size_t n_tx = scenario.n_tx;
  LocalParams p = LocalParams::defaults(n_tx, k, seed);
  if (local.p_mutation) p.p_mutation = *local.p_mutation;
  if (local.n_init) p.n_init = *local.n_init;
  p.iterations = local.iterations;
  p.subcarrier_policy = local.policy;
  p.user_radius = local.user_radius;
  return p;
}

void ScenarioConfig::validate() const {
  scenario.validate();
  carrier.validate();
  if (!std::isfinite(snr_db)) throw ParameterError("snr_db must be finite");
  if (user_counts.empty()) throw ParameterError("user_counts must not be empty");
  for (auto u : user_counts)
    if (u < 1) throw ParameterError("user counts must be at least 1");
  if (replication < 1) throw ParameterError("replication must be at least 1");
  if (local.seeds < 1) throw ParameterError("local.seeds must be at least 1");
  for (auto k : local.k_grid)
    if (k < 1 || k + 1 > scenario.n_tx)
      throw ParameterError("k_grid entries must lie in [1, N_T - 1]");
  local_params(local.k_grid.empty() ? 1 : local.k_grid.front(), 0).validate(scenario.n_tx);
  if (!(subcarrier_fraction > 0.0 && subcarrier_fraction <= 1.0))
    throw ParameterError("subcarrier fraction must lie in (0, 1]");
  if (strongest_count < 1 || strongest_count > carrier.n_subcarriers)
    throw ParameterError("strongest count must lie in [1, n_subcarriers]");
  PerturbationSpec{perturbation_magnitude, 0}.validate();
  if (perturbation_seeds < 1) throw ParameterError("perturbation seeds must be at least 1");
}

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!j.is_object()) throw FormatError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw FormatError("unknown key '" + key + "' in " + where);
  }
}

Point3 point_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("expected an [x, y, z] triple");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Box box_from(const json& j, const std::string& where) {
  check_keys(j, {"min", "max"}, where);
  return {point_from(j.at("min")), point_from(j.at("max"))};
}

json box_json(const Box& b) {
  return {{"min", {b.lo.x, b.lo.y, b.lo.z}}, {"max", {b.hi.x, b.hi.y, b.hi.z}}};
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

SubcarrierPolicy policy_from(const std::string& s, const ScenarioConfig& c) {
  if (s == "full") return SubcarrierPolicy::full();
  if (s == "random") return SubcarrierPolicy::random_fraction(c.subcarrier_fraction);
  if (s == "strongest") return SubcarrierPolicy::strongest(c.strongest_count);
  throw FormatError("unknown subcarrier policy '" + s + "' (expected full, random, strongest)");
}

std::string policy_name(const SubcarrierPolicy& p) {
  switch (p.kind) {
    case SubcarrierPolicy::Kind::kFull:
      return "full";
    case SubcarrierPolicy::Kind::kRandomFraction:
      return "random";
    case SubcarrierPolicy::Kind::kStrongest:
      return "strongest";
  }
  return "full";
}

}  // namespace

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  try {
    check_keys(j,
               {"version", "experiment", "master_seed", "snr_db", "power_control",
                "user_counts", "replication", "scenario", "carrier", "local", "subcarriers",
                "perturbation"},
               "config");
    if (!j.contains("version")) throw FormatError("config is missing the 'version' field");
    if (j.at("version").get<int>() != kConfigVersion)
      throw FormatError("unsupported config version " + j.at("version").dump());

    read(j, "experiment", c.experiment);
    read(j, "master_seed", c.master_seed);
    read(j, "snr_db", c.snr_db);
    if (j.contains("power_control"))
      c.power_control = power_control_from_string(j.at("power_control").get<std::string>());
    read(j, "user_counts", c.user_counts);
    read(j, "replication", c.replication);

    if (j.contains("scenario")) {
      const auto& s = j.at("scenario");
      check_keys(s,
                 {"n_tx", "n_scatterers", "area", "obstacle", "tx_height", "user_height",
                  "max_attempts"},
                 "scenario");
      read(s, "n_tx", c.scenario.n_tx);
      read(s, "n_scatterers", c.scenario.n_scatterers);
      if (s.contains("area")) c.scenario.area = box_from(s.at("area"), "scenario.area");
      if (s.contains("obstacle"))
        c.scenario.obstacle = box_from(s.at("obstacle"), "scenario.obstacle");
      read(s, "tx_height", c.scenario.tx_height);
      read(s, "user_height", c.scenario.user_height);
      read(s, "max_attempts", c.scenario.max_attempts);
    }
    if (j.contains("carrier")) {
      const auto& g = j.at("carrier");
      check_keys(g, {"frequency_hz", "bandwidth_hz", "n_subcarriers"}, "carrier");
      read(g, "frequency_hz", c.carrier.carrier_hz);
      read(g, "bandwidth_hz", c.carrier.bandwidth_hz);
      read(g, "n_subcarriers", c.carrier.n_subcarriers);
    }
    if (j.contains("subcarriers")) {
      const auto& s = j.at("subcarriers");
      check_keys(s, {"random_fraction", "strongest_count"}, "subcarriers");
      read(s, "random_fraction", c.subcarrier_fraction);
      read(s, "strongest_count", c.strongest_count);
    }
    if (j.contains("local")) {
      const auto& l = j.at("local");
      check_keys(l,
                 {"k_grid", "p_mutation", "iterations", "n_init", "seeds", "user_radius",
                  "policy"},
                 "local");
      read(l, "k_grid", c.local.k_grid);
      read(l, "p_mutation", c.local.p_mutation);
      read(l, "iterations", c.local.iterations);
      read(l, "n_init", c.local.n_init);
      read(l, "seeds", c.local.seeds);
      read(l, "user_radius", c.local.user_radius);
      if (l.contains("policy")) c.local.policy = policy_from(l.at("policy").get<std::string>(), c);
    }
    if (j.contains("perturbation")) {
      const auto& p = j.at("perturbation");
      check_keys(p, {"magnitude", "seeds"}, "perturbation");
      read(p, "magnitude", c.perturbation_magnitude);
      read(p, "seeds", c.perturbation_seeds);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  try {
    c.validate();
  } catch (const ParameterError& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  return c;
}

json config_to_json(const ScenarioConfig& c) {
  json local = {{"k_grid", c.local.k_grid},
                {"iterations", c.local.iterations},
                {"seeds", c.local.seeds},
                {"policy", policy_name(c.local.policy)}};
  local["p_mutation"] = c.local.p_mutation ? json(*c.local.p_mutation) : json(nullptr);
  local["n_init"] = c.local.n_init ? json(*c.local.n_init) : json(nullptr);
  local["user_radius"] = c.local.user_radius ? json(*c.local.user_radius) : json(nullptr);
  return {{"version", kConfigVersion},
          {"experiment", c.experiment},
          {"master_seed", c.master_seed},
          {"snr_db", c.snr_db},
          {"power_control", to_string(c.power_control)},
          {"user_counts", c.user_counts},
          {"replication", c.replication},
          {"scenario",
           {{"n_tx", c.scenario.n_tx},
            {"n_scatterers", c.scenario.n_scatterers},
            {"area", box_json(c.scenario.area)},
            {"obstacle", box_json(c.scenario.obstacle)},
            {"tx_height", c.scenario.tx_height},
            {"user_height", c.scenario.user_height},
            {"max_attempts", c.scenario.max_attempts}}},
          {"carrier",
           {{"frequency_hz", c.carrier.carrier_hz},
            {"bandwidth_hz", c.carrier.bandwidth_hz},
            {"n_subcarriers", c.carrier.n_subcarriers}}},
          {"local", local},
          {"subcarriers",
           {{"random_fraction", c.subcarrier_fraction},
            {"strongest_count", c.strongest_count}}},
          {"perturbation",
           {{"magnitude", c.perturbation_magnitude}, {"seeds", c.perturbation_seeds}}}};
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace antsel
