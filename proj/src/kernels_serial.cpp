// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>

#include "antsel/errors.hpp"
#include "antsel/kernels.hpp"

namespace antsel::kernels {

std::vector<Path> propagation_paths(const ScenarioGeometry& g, std::size_t user,
                                    std::size_t tx) {
  std::vector<Path> paths;
  const Point3& a = g.tx[tx];
  const Point3& b = g.users[user];
  if (!g.obstacle.intersects_segment(a, b)) {
    const double d = distance(a, b);
    paths.push_back({1.0 / d, d});
  }
  for (const Point3& s : g.scatterers) {
    if (g.obstacle.intersects_segment(a, s) || g.obstacle.intersects_segment(s, b)) continue;
    const double d1 = distance(a, s);
    const double d2 = distance(s, b);
    paths.push_back({1.0 / (d1 * d2), d1 + d2});
  }
  return paths;
}

void check_path_lengths(const ScenarioGeometry& g) {
  for (const auto& t : g.tx) {
    for (const auto& u : g.users)
      if (distance(t, u) == 0.0)
        throw DegenerateGeometryError("antenna and user positions coincide");
    for (const auto& s : g.scatterers)
      if (distance(t, s) == 0.0)
        throw DegenerateGeometryError("antenna and scatterer positions coincide");
  }
  for (const auto& u : g.users)
    for (const auto& s : g.scatterers)
      if (distance(u, s) == 0.0)
        throw DegenerateGeometryError("user and scatterer positions coincide");
}

namespace detail {

void synthesize_pair(const ScenarioGeometry& g, std::span<const double> freqs,
                     std::size_t user, std::size_t tx, ChannelTensor& out) {
  const auto paths = propagation_paths(g, user, tx);
  const double k0 = -2.0 * std::numbers::pi / kSpeedOfLight;
  for (std::size_t s = 0; s < freqs.size(); ++s) {
    cplx acc{0.0, 0.0};
    for (const Path& p : paths) acc += std::polar(p.amplitude, k0 * freqs[s] * p.length);
    out.at(user, tx, s) = acc;
  }
}

std::uint8_t local_proposal(const LocalProblem& p, std::size_t antenna) {
  std::span<const std::size_t> users;
  if (p.user_subsets != nullptr) {
    users = (*p.user_subsets)[antenna];
    if (users.empty()) return 0;
  }
  const std::size_t n_r = users.empty() ? p.tensor.n_users() : users.size();

  std::vector<std::size_t> on;
  for (const std::size_t j : p.table.neighbors[antenna])
    if (p.flags[j]) on.push_back(j);
  std::sort(on.begin(), on.end());

  const double f_without =
      on.empty() ? 0.0 : power_factor(PowerControl::kB, p.rho, on.size(), n_r);
  const double f_with = power_factor(PowerControl::kB, p.rho, on.size() + 1, n_r);

  Eigen::MatrixXcd gram;
  double without = 0.0;
  double with = 0.0;
  for (const std::size_t sc : p.subcarriers) {
    gram_of_columns(p.tensor, sc, on, users, gram);
    if (!on.empty()) without += capacity_from_gram(gram, f_without);
    add_outer(p.tensor, sc, antenna, users, 1.0, gram);
    with += capacity_from_gram(gram, f_with);
  }
  const auto n = static_cast<double>(p.subcarriers.size());
  return (with / n) > (without / n) ? 1 : 0;
}

double greedy_score(const GreedyProblem& p, std::size_t candidate) {
  const std::size_t t = p.candidates[candidate];
  Eigen::MatrixXcd gram;
  double acc = 0.0;
  for (std::size_t j = 0; j < p.subcarriers.size(); ++j) {
    gram = p.grams[j];
    add_outer(p.tensor, p.subcarriers[j], t, {}, p.sign, gram);
    acc += capacity_from_gram(gram, p.f);
  }
  return acc / static_cast<double>(p.subcarriers.size());
}

}  // namespace detail

namespace serial {

void synthesize(const ScenarioGeometry& g, std::span<const double> freqs, ChannelTensor& out) {
  for (std::size_t r = 0; r < g.n_users(); ++r)
    for (std::size_t t = 0; t < g.n_tx(); ++t) detail::synthesize_pair(g, freqs, r, t, out);
}

void local_proposals(const LocalProblem& p, std::span<std::uint8_t> proposals) {
  for (std::size_t i = 0; i < proposals.size(); ++i) proposals[i] = detail::local_proposal(p, i);
}

void subcarrier_metrics(const ChannelTensor& tensor, std::span<const std::size_t> columns,
                        double f, Metric metric, std::span<const std::size_t> subcarriers,
                        std::span<double> out) {
  Eigen::MatrixXcd gram;
  for (std::size_t j = 0; j < subcarriers.size(); ++j) {
    gram_of_columns(tensor, subcarriers[j], columns, {}, gram);
    out[j] = metric_from_gram(metric, gram, columns.size(), f);
  }
}

void greedy_scores(const GreedyProblem& p, std::span<double> out) {
  for (std::size_t c = 0; c < p.candidates.size(); ++c) out[c] = detail::greedy_score(p, c);
}

}  // namespace serial
}  // namespace antsel::kernels
