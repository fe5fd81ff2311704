// SPDX-License-Identifier: Apache-2.0
#include "antsel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "antsel/errors.hpp"
#include "antsel/rng.hpp"

namespace antsel {

double distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool Box::contains(const Point3& p) const {
  return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
         p.z <= hi.z;
}

bool Box::intersects_segment(const Point3& a, const Point3& b) const {
  // Slab clipping of the parameter interval t in [0, 1].
  double t0 = 0.0;
  double t1 = 1.0;
  const double start[3] = {a.x, a.y, a.z};
  const double delta[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
  const double lower[3] = {lo.x, lo.y, lo.z};
  const double upper[3] = {hi.x, hi.y, hi.z};
  for (int axis = 0; axis < 3; ++axis) {
    if (delta[axis] == 0.0) {
      if (start[axis] < lower[axis] || start[axis] > upper[axis]) return false;
      continue;
    }
    double ta = (lower[axis] - start[axis]) / delta[axis];
    double tb = (upper[axis] - start[axis]) / delta[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

namespace {

bool valid_box(const Box& b) {
  return b.lo.x <= b.hi.x && b.lo.y <= b.hi.y && b.lo.z <= b.hi.z &&
         std::isfinite(b.lo.x) && std::isfinite(b.lo.y) && std::isfinite(b.lo.z) &&
         std::isfinite(b.hi.x) && std::isfinite(b.hi.y) && std::isfinite(b.hi.z);
}

template <class Draw>
Point3 place(Rng& rng, const Box& obstacle, std::size_t max_attempts, const char* what,
             Draw draw) {
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    const Point3 p = draw(rng);
    if (!obstacle.contains(p)) return p;
  }
  throw PlacementError(std::string("could not place ") + what + " outside the obstacle after " +
                       std::to_string(max_attempts) + " attempts");
}

}  // namespace

void ScenarioParams::validate() const {
  if (n_tx < 1) throw ParameterError("n_tx must be at least 1");
  if (n_users < 1) throw ParameterError("n_users must be at least 1");
  if (!valid_box(area)) throw ParameterError("area bounds are not a valid box");
  if (!valid_box(obstacle)) throw ParameterError("obstacle is not a valid box");
  if (tx_height < area.lo.z || tx_height > area.hi.z)
    throw ParameterError("tx_height lies outside the area");
  if (user_height < area.lo.z || user_height > area.hi.z)
    throw ParameterError("user_height lies outside the area");
  if (max_attempts < 1) throw ParameterError("max_attempts must be at least 1");
}

void ScenarioGeometry::validate() const {
  if (tx.empty()) throw ParameterError("geometry needs at least one antenna");
  if (users.empty()) throw ParameterError("geometry needs at least one user");
  auto check = [&](const std::vector<Point3>& pts, const char* what) {
    for (const auto& p : pts)
      if (!area.contains(p))
        throw ParameterError(std::string(what) + " position outside area bounds");
  };
  check(tx, "antenna");
  check(users, "user");
  check(scatterers, "scatterer");
  for (std::size_t i = 0; i < tx.size(); ++i)
    for (std::size_t j = i + 1; j < tx.size(); ++j)
      if (tx[i] == tx[j]) throw ParameterError("antenna positions must be pairwise distinct");
}

ScenarioGeometry generate_geometry(const ScenarioParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  const Box& a = params.area;
  ScenarioGeometry g;
  g.area = a;
  g.obstacle = params.obstacle;

  auto at_height = [&](double z) {
    return [&a, z](Rng& r) {
      const double x = r.uniform(a.lo.x, a.hi.x);
      const double y = r.uniform(a.lo.y, a.hi.y);
      return Point3{x, y, z};
    };
  };
  auto in_volume = [&a](Rng& r) {
    const double x = r.uniform(a.lo.x, a.hi.x);
    const double y = r.uniform(a.lo.y, a.hi.y);
    const double z = r.uniform(a.lo.z, a.hi.z);
    return Point3{x, y, z};
  };

  g.tx.reserve(params.n_tx);
  while (g.tx.size() < params.n_tx) {
    const Point3 p = place(rng, g.obstacle, params.max_attempts, "antenna",
                           at_height(params.tx_height));
    // Coincident draws are astronomically unlikely but would break the
    // neighbourhood ordering, so redraw.
    if (std::find(g.tx.begin(), g.tx.end(), p) == g.tx.end()) g.tx.push_back(p);
  }
  for (std::size_t i = 0; i < params.n_users; ++i)
    g.users.push_back(
        place(rng, g.obstacle, params.max_attempts, "user", at_height(params.user_height)));
  for (std::size_t i = 0; i < params.n_scatterers; ++i)
    g.scatterers.push_back(place(rng, g.obstacle, params.max_attempts, "scatterer", in_volume));
  return g;
}

namespace {

nlohmann::json point_json(const Point3& p) { return nlohmann::json::array({p.x, p.y, p.z}); }

Point3 point_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("expected an [x, y, z] triple");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

nlohmann::json points_json(const std::vector<Point3>& pts) {
  auto arr = nlohmann::json::array();
  for (const auto& p : pts) arr.push_back(point_json(p));
  return arr;
}

std::vector<Point3> points_from(const nlohmann::json& j) {
  if (!j.is_array()) throw FormatError("expected an array of points");
  std::vector<Point3> out;
  for (const auto& e : j) out.push_back(point_from(e));
  return out;
}

nlohmann::json box_json(const Box& b) {
  return {{"min", point_json(b.lo)}, {"max", point_json(b.hi)}};
}

Box box_from(const nlohmann::json& j) { return {point_from(j.at("min")), point_from(j.at("max"))}; }

}  // namespace

nlohmann::json geometry_to_json(const ScenarioGeometry& g) {
  return {{"tx", points_json(g.tx)},
          {"users", points_json(g.users)},
          {"scatterers", points_json(g.scatterers)},
          {"obstacle", box_json(g.obstacle)},
          {"area", box_json(g.area)}};
}

ScenarioGeometry geometry_from_json(const nlohmann::json& j) {
  try {
    ScenarioGeometry g;
    g.tx = points_from(j.at("tx"));
    g.users = points_from(j.at("users"));
    g.scatterers = points_from(j.at("scatterers"));
    g.obstacle = box_from(j.at("obstacle"));
    g.area = box_from(j.at("area"));
    g.validate();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("geometry document: ") + e.what());
  }
}

}  // namespace antsel
