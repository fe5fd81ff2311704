// SPDX-License-Identifier: Apache-2.0
#include "antsel/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "antsel/errors.hpp"
#include "antsel/rng.hpp"

namespace antsel {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kLocal:
      return "local";
    case Algorithm::kGreedyForward:
      return "greedy-forward";
    case Algorithm::kGreedyBackward:
      return "greedy-backward";
    case Algorithm::kRandom:
      return "random";
  }
  return "unknown";
}

void ResultTable::append(const ResultTable& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string full_label(const ChannelTensor& t) {
  return SubcarrierPolicy::full().label(t.n_subcarriers());
}

RunResult make_row(const std::string& algorithm, const ScenarioConfig& config,
                   std::size_t n_users, std::optional<std::size_t> k, std::string policy,
                   const ChannelTensor& tensor, const SelectionMask& mask, std::uint64_t seed,
                   double wall_ms) {
  const auto sc = all_subcarriers(tensor);
  const auto report = evaluate_selection(tensor, mask, config.power_control, config.rho(), sc);
  RunResult r;
  r.algorithm = algorithm;
  r.power_control = config.power_control;
  r.n_users = n_users;
  r.k = k;
  r.policy = std::move(policy);
  r.n_selected = report.n_selected;
  r.capacity_eq = report.equal_power_capacity;
  r.zf_rate = report.zf_waterfilling_rate;
  r.seed = seed;
  r.wall_time_ms = wall_ms;
  return r;
}

template <class Fn>
void guarded(ResultTable& table, const std::string& run, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    table.failures.push_back({run, e.what()});
  }
}

std::string run_name(const char* what, std::size_t n_users, std::optional<std::size_t> k = {},
                     std::optional<std::size_t> index = {}) {
  std::string s = std::string(what) + " n_users=" + std::to_string(n_users);
  if (k) s += " k=" + std::to_string(*k);
  if (index) s += " seed_index=" + std::to_string(*index);
  return s;
}

}  // namespace

Scenario build_scenario(const ScenarioConfig& config, std::size_t n_users) {
  ScenarioParams params = config.scenario;
  params.n_users = n_users;
  Scenario s;
  s.geometry =
      generate_geometry(params, derive_seed(config.master_seed, SeedTag::kGeometry, n_users));
  s.tensor = normalize_csi(synthesize_channel(s.geometry, config.carrier));
  return s;
}

RandomBaseline random_baseline(const ChannelTensor& tensor, std::size_t n_ts,
                               const ScenarioConfig& config, std::size_t n_users) {
  RandomBaseline out;
  const auto sc = all_subcarriers(tensor);
  for (std::size_t rep = 0; rep < config.replication; ++rep) {
    const std::uint64_t seed = derive_seed(config.master_seed, SeedTag::kRandomSelect,
                                           (std::uint64_t{n_users} << 32) |
                                               (std::uint64_t{n_ts} << 16) | rep);
    if (rep == 0) out.first_seed = seed;
    const auto mask = random_select(n_ts, tensor.n_tx(), seed);
    const auto report = evaluate_selection(tensor, mask, config.power_control, config.rho(), sc);
    // Running mean: identical draws (e.g. N_TS = N_T) reproduce their value exactly.
    const double n = static_cast<double>(rep + 1);
    out.capacity_eq += (report.equal_power_capacity - out.capacity_eq) / n;
    out.zf_rate += (report.zf_waterfilling_rate - out.zf_rate) / n;
  }
  return out;
}

std::uint64_t local_seed(const ScenarioConfig& config, std::size_t n_users, std::size_t k,
                         std::size_t index) {
  return derive_seed(config.master_seed, SeedTag::kLocal,
                     (std::uint64_t{n_users} << 40) | (std::uint64_t{k} << 20) | index);
}

ResultTable sweep_selected_count(const ScenarioConfig& config,
                                 const std::set<Algorithm>& algorithms) {
  config.validate();
  ResultTable table;
  const double rho = config.rho();
  for (const std::size_t n_users : config.user_counts) {
    Scenario scenario;
    try {
      scenario = build_scenario(config, n_users);
    } catch (const std::exception& e) {
      table.failures.push_back({run_name("scenario", n_users), e.what()});
      continue;
    }
    const ChannelTensor& h = scenario.tensor;
    const std::size_t n_tx = h.n_tx();
    const auto sc = all_subcarriers(h);
    const auto full = full_label(h);

    if (algorithms.contains(Algorithm::kGreedyForward)) {
      guarded(table, run_name("greedy-forward", n_users), [&] {
        const auto start = Clock::now();
        const auto path = greedy_forward_path(h, n_tx, rho, config.power_control, sc);
        const double ms = elapsed_ms(start);
        for (std::size_t n = 1; n <= n_tx; ++n) {
          const auto mask = SelectionMask::from_indices(
              n_tx, std::span(path).first(n));
          table.rows.push_back(
              make_row("greedy-forward", config, n_users, {}, full, h, mask, 0, ms));
        }
      });
    }
    if (algorithms.contains(Algorithm::kGreedyBackward)) {
      guarded(table, run_name("greedy-backward", n_users), [&] {
        const auto start = Clock::now();
        const auto removed = greedy_backward_path(h, 1, rho, config.power_control, sc);
        const double ms = elapsed_ms(start);
        for (std::size_t n = 1; n <= n_tx; ++n) {
          auto mask = SelectionMask::all(n_tx);
          for (std::size_t i = 0; i < n_tx - n; ++i) mask.set(removed[i], false);
          table.rows.push_back(
              make_row("greedy-backward", config, n_users, {}, full, h, mask, 0, ms));
        }
      });
    }
    if (algorithms.contains(Algorithm::kRandom)) {
      guarded(table, run_name("random", n_users), [&] {
        for (std::size_t n = 1; n <= n_tx; ++n) {
          const auto start = Clock::now();
          const auto base = random_baseline(h, n, config, n_users);
          RunResult r;
          r.algorithm = "random";
          r.power_control = config.power_control;
          r.n_users = n_users;
          r.policy = full;
          r.n_selected = n;
          r.capacity_eq = base.capacity_eq;
          r.zf_rate = base.zf_rate;
          r.seed = base.first_seed;
          r.wall_time_ms = elapsed_ms(start);
          table.rows.push_back(r);
        }
      });
    }
    if (algorithms.contains(Algorithm::kLocal)) {
      const auto policy = config.local.policy.label(h.n_subcarriers());
      for (const std::size_t k : config.local.k_grid) {
        guarded(table, run_name("local", n_users, k), [&] {
          const auto neighborhoods = build_neighborhoods(scenario.geometry.tx, k);
          for (std::size_t idx = 0; idx < config.local.seeds; ++idx) {
            const auto seed = local_seed(config, n_users, k, idx);
            const auto start = Clock::now();
            const auto trace = local_select(h, neighborhoods, config.local_params(k, seed), rho,
                                            config.power_control, &scenario.geometry);
            const double ms = elapsed_ms(start);
            table.rows.push_back(
                make_row("local", config, n_users, k, policy, h, trace.committed, seed, ms));
          }
        });
      }
    }
  }
  return table;
}

NeighborhoodStudy sweep_neighborhood(const ScenarioConfig& config,
                                     std::span<const std::size_t> k_grid) {
  config.validate();
  NeighborhoodStudy study;
  const double rho = config.rho();
  for (const std::size_t n_users : config.user_counts) {
    Scenario scenario;
    try {
      scenario = build_scenario(config, n_users);
    } catch (const std::exception& e) {
      study.table.failures.push_back({run_name("scenario", n_users), e.what()});
      continue;
    }
    const ChannelTensor& h = scenario.tensor;
    const auto policy = config.local.policy.label(h.n_subcarriers());
    for (const std::size_t k : k_grid) {
      guarded(study.table, run_name("local", n_users, k), [&] {
        const auto neighborhoods = build_neighborhoods(scenario.geometry.tx, k);
        for (std::size_t idx = 0; idx < config.local.seeds; ++idx) {
          const auto seed = local_seed(config, n_users, k, idx);
          const auto start = Clock::now();
          const auto trace = local_select(h, neighborhoods, config.local_params(k, seed), rho,
                                          config.power_control, &scenario.geometry);
          const double ms = elapsed_ms(start);
          auto row = make_row("local", config, n_users, k, policy, h, trace.committed, seed, ms);
          NeighborhoodRow nr;
          nr.n_users = n_users;
          nr.k = k;
          nr.seed = seed;
          nr.n_selected = row.n_selected;
          nr.capacity_eq = row.capacity_eq;
          nr.zf_rate = row.zf_rate;
          for (const auto& it : trace.iterations) nr.size_trace.push_back(it.flags.count());
          study.rows.push_back(std::move(nr));
          study.table.rows.push_back(std::move(row));
        }
      });
    }
  }
  return study;
}

PolicyComparison compare_subcarrier_policies(const ScenarioConfig& config) {
  config.validate();
  PolicyComparison out;
  const double rho = config.rho();
  for (const std::size_t n_users : config.user_counts) {
    Scenario scenario;
    try {
      scenario = build_scenario(config, n_users);
    } catch (const std::exception& e) {
      out.table.failures.push_back({run_name("scenario", n_users), e.what()});
      continue;
    }
    const ChannelTensor& h = scenario.tensor;
    std::map<std::size_t, RandomBaseline> baselines;
    auto baseline = [&](std::size_t n_ts) -> const RandomBaseline& {
      auto it = baselines.find(n_ts);
      if (it == baselines.end())
        it = baselines.emplace(n_ts, random_baseline(h, n_ts, config, n_users)).first;
      return it->second;
    };

    const std::vector<SubcarrierPolicy> policies{
        SubcarrierPolicy::full(), SubcarrierPolicy::random_fraction(config.subcarrier_fraction),
        SubcarrierPolicy::strongest(config.strongest_count)};
    for (const auto& policy : policies) {
      const auto label = policy.label(h.n_subcarriers());
      for (const std::size_t k : config.local.k_grid) {
        guarded(out.table, run_name(("local " + label).c_str(), n_users, k), [&] {
          const auto neighborhoods = build_neighborhoods(scenario.geometry.tx, k);
          for (std::size_t idx = 0; idx < config.local.seeds; ++idx) {
            const auto seed = local_seed(config, n_users, k, idx);
            auto params = config.local_params(k, seed);
            params.subcarrier_policy = policy;
            const auto start = Clock::now();
            const auto trace = local_select(h, neighborhoods, params, rho, config.power_control,
                                            &scenario.geometry);
            const double ms = elapsed_ms(start);
            auto row = make_row("local", config, n_users, k, label, h, trace.committed, seed, ms);
            const auto& base = baseline(row.n_selected);
            out.rows.push_back({label, n_users, k, seed, row.n_selected, row.zf_rate,
                                base.zf_rate, row.zf_rate - base.zf_rate, ms});
            out.table.rows.push_back(std::move(row));
          }
        });
      }
    }

    // Greedy forward at every N_TS a local run landed on.
    std::vector<std::size_t> matched;
    for (const auto& r : out.rows)
      if (r.n_users == n_users) matched.push_back(r.n_selected);
    std::sort(matched.begin(), matched.end());
    matched.erase(std::unique(matched.begin(), matched.end()), matched.end());
    matched.erase(std::remove(matched.begin(), matched.end(), std::size_t{0}), matched.end());
    if (!matched.empty()) {
      guarded(out.table, run_name("greedy-forward", n_users), [&] {
        const auto full = full_label(h);
        const auto start = Clock::now();
        const auto path =
            greedy_forward_path(h, matched.back(), rho, config.power_control,
                                all_subcarriers(h));
        const double ms = elapsed_ms(start);
        for (const auto n : matched) {
          const auto mask = SelectionMask::from_indices(h.n_tx(), std::span(path).first(n));
          auto row = make_row("greedy-forward", config, n_users, {}, full, h, mask, 0, ms);
          const auto& base = baseline(n);
          out.rows.push_back({"greedy-forward", n_users, {}, 0, n, row.zf_rate, base.zf_rate,
                              row.zf_rate - base.zf_rate, ms});
          out.table.rows.push_back(std::move(row));
        }
      });
    }
    for (const auto& [n_ts, base] : baselines) {
      RunResult r;
      r.algorithm = "random";
      r.power_control = config.power_control;
      r.n_users = n_users;
      r.policy = full_label(h);
      r.n_selected = n_ts;
      r.capacity_eq = base.capacity_eq;
      r.zf_rate = base.zf_rate;
      r.seed = base.first_seed;
      out.table.rows.push_back(r);
    }
  }
  return out;
}

RobustnessStudy csi_robustness(const ScenarioConfig& config, double magnitude,
                               std::size_t n_seeds) {
  config.validate();
  PerturbationSpec{magnitude, 0}.validate();
  RobustnessStudy out;
  const double rho = config.rho();
  for (const std::size_t n_users : config.user_counts) {
    Scenario scenario;
    try {
      scenario = build_scenario(config, n_users);
    } catch (const std::exception& e) {
      out.table.failures.push_back({run_name("scenario", n_users), e.what()});
      continue;
    }
    const ChannelTensor& h = scenario.tensor;
    const auto policy = config.local.policy.label(h.n_subcarriers());
    for (const std::size_t k : config.local.k_grid) {
      guarded(out.table, run_name("csi", n_users, k), [&] {
        const auto neighborhoods = build_neighborhoods(scenario.geometry.tx, k);
        for (std::size_t idx = 0; idx < n_seeds; ++idx) {
          const auto pseed = derive_seed(config.master_seed, SeedTag::kPerturbation,
                                         (std::uint64_t{n_users} << 32) | idx);
          const auto perturbed = perturb_csi(h, {magnitude, pseed});
          const auto lseed = local_seed(config, n_users, k, idx);
          const auto params = config.local_params(k, lseed);

          auto start = Clock::now();
          const auto clean = local_select(h, neighborhoods, params, rho, config.power_control,
                                          &scenario.geometry);
          const double clean_ms = elapsed_ms(start);
          start = Clock::now();
          const auto noisy = local_select(perturbed, neighborhoods, params, rho,
                                          config.power_control, &scenario.geometry);
          const double noisy_ms = elapsed_ms(start);

          auto clean_row =
              make_row("local-clean", config, n_users, k, policy, h, clean.committed, lseed,
                       clean_ms);
          auto noisy_row = make_row("local-perturbed", config, n_users, k, policy, h,
                                    noisy.committed, pseed, noisy_ms);
          out.rows.push_back({n_users, k, lseed, pseed, clean_row.n_selected,
                              noisy_row.n_selected, clean_row.zf_rate, noisy_row.zf_rate});
          out.table.rows.push_back(std::move(clean_row));
          out.table.rows.push_back(std::move(noisy_row));
        }
      });
    }
  }
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ParameterError("spearman needs two equal-length samples of size >= 2");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace antsel
