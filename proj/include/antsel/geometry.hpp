// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

namespace antsel {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

double distance(const Point3& a, const Point3& b);

/// Axis-aligned box given by its low and high corners (inclusive).
struct Box {
  Point3 lo;
  Point3 hi;

  bool contains(const Point3& p) const;
  /// True if the closed segment [a, b] touches the closed box.
  bool intersects_segment(const Point3& a, const Point3& b) const;

  friend bool operator==(const Box&, const Box&) = default;
};

struct ScenarioParams {
  std::size_t n_tx = 64;
  std::size_t n_users = 8;
  std::size_t n_scatterers = 75;
  Box area{{0.0, 0.0, 0.0}, {100.0, 100.0, 20.0}};
  Box obstacle{{40.0, 30.0, 0.0}, {60.0, 70.0, 15.0}};
  double tx_height = 6.0;
  double user_height = 1.5;
  /// Rejection-sampling budget per entity before giving up.
  std::size_t max_attempts = 10000;

  void validate() const;
};

struct ScenarioGeometry {
  std::vector<Point3> tx;
  std::vector<Point3> users;
  std::vector<Point3> scatterers;
  Box obstacle;
  Box area;

  std::size_t n_tx() const { return tx.size(); }
  std::size_t n_users() const { return users.size(); }

  /// Throws ParameterError if a type invariant is violated.
  void validate() const;

  friend bool operator==(const ScenarioGeometry&, const ScenarioGeometry&) = default;
};

/// Antennas go uniformly over the area at a common height, users at the user
/// height, scatterers anywhere in the volume. Nothing is placed inside the
/// obstacle. Same (params, seed) always yields the same geometry.
ScenarioGeometry generate_geometry(const ScenarioParams& params, std::uint64_t seed);

nlohmann::json geometry_to_json(const ScenarioGeometry& g);
ScenarioGeometry geometry_from_json(const nlohmann::json& j);

}  // namespace antsel
