// SPDX-License-Identifier: Apache-2.0
#include "antsel/selection.hpp"

#include <algorithm>
#include <numeric>

#include "antsel/errors.hpp"
#include "antsel/kernels.hpp"

namespace antsel {

NeighborhoodTable build_neighborhoods(std::span<const Point3> tx_positions, std::size_t k) {
  const std::size_t n = tx_positions.size();
  if (n < 2 || k < 1 || k > n - 1)
    throw ParameterError("neighbourhood size k must lie in [1, N_T - 1]");
  NeighborhoodTable table;
  table.k = k;
  table.neighbors.resize(n);
  std::vector<std::pair<double, std::size_t>> by_distance;
  for (std::size_t i = 0; i < n; ++i) {
    by_distance.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) by_distance.emplace_back(distance(tx_positions[i], tx_positions[j]), j);
    std::partial_sort(by_distance.begin(), by_distance.begin() + static_cast<std::ptrdiff_t>(k),
                      by_distance.end());
    auto& d = table.neighbors[i];
    for (std::size_t m = 0; m < k; ++m) d.push_back(by_distance[m].second);
  }
  return table;
}

std::string SubcarrierPolicy::label(std::size_t total) const {
  switch (kind) {
    case Kind::kFull:
      return "full-" + std::to_string(total);
    case Kind::kRandomFraction:
      return "random-" +
             std::to_string(std::llround(fraction * static_cast<double>(total)));
    case Kind::kStrongest:
      return "strongest-" + std::to_string(count);
  }
  return "unknown";
}

LocalParams LocalParams::defaults(std::size_t n_tx, std::size_t k, std::uint64_t seed) {
  LocalParams p;
  p.k = k;
  p.p_mutation = n_tx > 0 ? 1.0 / static_cast<double>(n_tx) : 0.0;
  p.iterations = 30;
  p.n_init = n_tx / 2;
  p.seed = seed;
  return p;
}

void LocalParams::validate(std::size_t n_tx) const {
  if (n_tx < 2 || k < 1 || k > n_tx - 1)
    throw ParameterError("neighbourhood size k must lie in [1, N_T - 1]");
  if (!(p_mutation >= 0.0 && p_mutation <= 1.0))
    throw ParameterError("mutation probability must lie in [0, 1]");
  if (iterations < 1) throw ParameterError("iteration count must be at least 1");
  if (n_init > n_tx) throw ParameterError("n_init exceeds N_T");
  if (user_radius && !(*user_radius > 0.0)) throw ParameterError("user radius must be positive");
}

std::vector<std::vector<std::size_t>> users_within_radius(const ScenarioGeometry& geometry,
                                                          double radius) {
  std::vector<std::vector<std::size_t>> out(geometry.n_tx());
  for (std::size_t t = 0; t < geometry.n_tx(); ++t)
    for (std::size_t r = 0; r < geometry.n_users(); ++r)
      if (distance(geometry.tx[t], geometry.users[r]) <= radius) out[t].push_back(r);
  return out;
}

namespace {

using ProposalKernel = void (*)(const kernels::LocalProblem&, std::span<std::uint8_t>);

LocalStepResult run_step(ProposalKernel kernel, const ChannelTensor& tensor,
                         const SelectionMask& flags, const NeighborhoodTable& table,
                         double rho, std::span<const std::size_t> subcarriers,
                         double p_mutation, Rng& rng,
                         const std::vector<std::vector<std::size_t>>* user_subsets) {
  const std::size_t n = tensor.n_tx();
  if (flags.size() != n) throw ParameterError("flag vector length does not match N_T");
  if (table.neighbors.size() != n) throw ParameterError("neighbourhood table size mismatch");
  if (subcarriers.empty()) throw EmptyInputError("subcarrier list is empty");
  if (user_subsets != nullptr && user_subsets->size() != n)
    throw ParameterError("user subset table size mismatch");

  std::vector<std::uint8_t> proposals(n, 0);
  kernel({tensor, flags, table, rho, subcarriers, user_subsets}, proposals);

  LocalStepResult result{SelectionMask(n), {}};
  for (std::size_t i = 0; i < n; ++i) {
    bool on = proposals[i] != 0;
    if (rng.uniform() < p_mutation) {
      on = !on;
      result.mutated.push_back(i);
    }
    result.flags.set(i, on);
  }
  return result;
}

}  // namespace

LocalStepResult local_step(const ChannelTensor& tensor, const SelectionMask& flags,
                           const NeighborhoodTable& table, double rho,
                           std::span<const std::size_t> subcarriers, double p_mutation,
                           Rng& rng,
                           const std::vector<std::vector<std::size_t>>* user_subsets) {
  return run_step(&kernels::omp::local_proposals, tensor, flags, table, rho, subcarriers,
                  p_mutation, rng, user_subsets);
}

LocalStepResult local_step_serial(const ChannelTensor& tensor, const SelectionMask& flags,
                                  const NeighborhoodTable& table, double rho,
                                  std::span<const std::size_t> subcarriers,
                                  double p_mutation, Rng& rng,
                                  const std::vector<std::vector<std::size_t>>* user_subsets) {
  return run_step(&kernels::serial::local_proposals, tensor, flags, table, rho, subcarriers,
                  p_mutation, rng, user_subsets);
}

LocalRunTrace local_select(const ChannelTensor& tensor, const NeighborhoodTable& table,
                           const LocalParams& params, double rho,
                           PowerControl control_for_scoring,
                           const ScenarioGeometry* geometry) {
  const std::size_t n = tensor.n_tx();
  params.validate(n);
  if (table.neighbors.size() != n) throw ParameterError("neighbourhood table size mismatch");

  std::vector<std::vector<std::size_t>> user_subsets;
  if (params.user_radius) {
    if (geometry == nullptr) throw ParameterError("user radius filter needs the geometry");
    user_subsets = users_within_radius(*geometry, *params.user_radius);
  }
  const auto* subsets = params.user_radius ? &user_subsets : nullptr;

  Rng rng(params.seed);
  SelectionMask flags = SelectionMask::from_indices(n, rng.sample(n, params.n_init));

  const auto every_subcarrier = all_subcarriers(tensor);
  std::vector<std::size_t> subcarriers;
  switch (params.subcarrier_policy.kind) {
    case SubcarrierPolicy::Kind::kFull:
      subcarriers = every_subcarrier;
      break;
    case SubcarrierPolicy::Kind::kStrongest:
      subcarriers = select_subcarriers_strongest(tensor, params.subcarrier_policy.count);
      std::sort(subcarriers.begin(), subcarriers.end());
      break;
    case SubcarrierPolicy::Kind::kRandomFraction:
      break;
  }

  LocalRunTrace trace;
  trace.iterations.reserve(params.iterations);
  for (std::size_t it = 0; it < params.iterations; ++it) {
    if (params.subcarrier_policy.kind == SubcarrierPolicy::Kind::kRandomFraction)
      subcarriers = select_subcarriers_random(tensor.n_subcarriers(),
                                              params.subcarrier_policy.fraction, rng.next());
    auto step = local_step(tensor, flags, table, rho, subcarriers, params.p_mutation, rng,
                           subsets);
    flags = std::move(step.flags);
    const double score = score_selection(tensor, flags, control_for_scoring, rho,
                                         every_subcarrier, Metric::kEqualPower);
    if (trace.iterations.empty() || score > trace.iterations[trace.best_iteration].score)
      trace.best_iteration = it;
    trace.iterations.push_back({flags, score, std::move(step.mutated)});
  }
  trace.committed = trace.iterations[trace.best_iteration].flags;
  return trace;
}

namespace {

std::vector<std::size_t> sorted_subcarriers(const ChannelTensor& tensor,
                                            std::span<const std::size_t> subcarriers) {
  if (subcarriers.empty()) throw EmptyInputError("subcarrier list is empty");
  std::vector<std::size_t> s(subcarriers.begin(), subcarriers.end());
  std::sort(s.begin(), s.end());
  if (s.back() >= tensor.n_subcarriers()) throw ParameterError("subcarrier index out of range");
  return s;
}

// Index into `candidates` of the highest score; first wins on ties, and
// candidates are kept ascending, so ties go to the lowest antenna index.
std::size_t argmax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c)
    if (scores[c] > scores[best]) best = c;
  return best;
}

}  // namespace

std::vector<std::size_t> greedy_forward_path(const ChannelTensor& tensor,
                                             std::size_t n_target, double rho,
                                             PowerControl control,
                                             std::span<const std::size_t> subcarriers) {
  const std::size_t n = tensor.n_tx();
  if (n_target < 1 || n_target > n) throw ParameterError("n_target must lie in [1, N_T]");
  const auto sc = sorted_subcarriers(tensor, subcarriers);
  const auto n_r = static_cast<Eigen::Index>(tensor.n_users());
  std::vector<Eigen::MatrixXcd> grams(sc.size(), Eigen::MatrixXcd::Zero(n_r, n_r));
  std::vector<std::size_t> candidates(n);
  std::iota(candidates.begin(), candidates.end(), std::size_t{0});

  std::vector<std::size_t> path;
  std::vector<double> scores;
  while (path.size() < n_target) {
    const double f = power_factor(control, rho, path.size() + 1, tensor.n_users());
    scores.assign(candidates.size(), 0.0);
    kernels::omp::greedy_scores({tensor, grams, sc, candidates, 1.0, f}, scores);
    const std::size_t pick = argmax(scores);
    const std::size_t t = candidates[pick];
    for (std::size_t j = 0; j < sc.size(); ++j) add_outer(tensor, sc[j], t, {}, 1.0, grams[j]);
    path.push_back(t);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return path;
}

std::vector<std::size_t> greedy_backward_path(const ChannelTensor& tensor,
                                              std::size_t n_target, double rho,
                                              PowerControl control,
                                              std::span<const std::size_t> subcarriers) {
  const std::size_t n = tensor.n_tx();
  if (n_target < 1 || n_target > n) throw ParameterError("n_target must lie in [1, N_T]");
  const auto sc = sorted_subcarriers(tensor, subcarriers);
  std::vector<std::size_t> remaining(n);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  std::vector<Eigen::MatrixXcd> grams(sc.size());
  for (std::size_t j = 0; j < sc.size(); ++j)
    gram_of_columns(tensor, sc[j], remaining, {}, grams[j]);

  std::vector<std::size_t> removed;
  std::vector<double> scores;
  while (remaining.size() > n_target) {
    const double f = power_factor(control, rho, remaining.size() - 1, tensor.n_users());
    scores.assign(remaining.size(), 0.0);
    kernels::omp::greedy_scores({tensor, grams, sc, remaining, -1.0, f}, scores);
    // Largest remaining capacity is the smallest loss.
    const std::size_t pick = argmax(scores);
    const std::size_t t = remaining[pick];
    for (std::size_t j = 0; j < sc.size(); ++j) add_outer(tensor, sc[j], t, {}, -1.0, grams[j]);
    removed.push_back(t);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return removed;
}

SelectionMask greedy_forward(const ChannelTensor& tensor, std::size_t n_target, double rho,
                             PowerControl control, std::span<const std::size_t> subcarriers) {
  const auto path = greedy_forward_path(tensor, n_target, rho, control, subcarriers);
  return SelectionMask::from_indices(tensor.n_tx(), path);
}

SelectionMask greedy_backward(const ChannelTensor& tensor, std::size_t n_target, double rho,
                              PowerControl control, std::span<const std::size_t> subcarriers) {
  const auto removed = greedy_backward_path(tensor, n_target, rho, control, subcarriers);
  auto mask = SelectionMask::all(tensor.n_tx());
  for (const auto t : removed) mask.set(t, false);
  return mask;
}

SelectionMask random_select(std::size_t n_target, std::size_t n_total, std::uint64_t seed) {
  if (n_target > n_total) throw ParameterError("n_target exceeds n_total");
  Rng rng(seed);
  return SelectionMask::from_indices(n_total, rng.sample(n_total, n_target));
}

}  // namespace antsel
