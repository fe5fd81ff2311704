// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Thresholds and runtime budgets are the constants
// below; nothing is tuned at run time.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "antsel/capacity.hpp"
#include "antsel/config.hpp"
#include "antsel/experiments.hpp"
#include "antsel/selection.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace antsel;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kDetRelTol = 1e-9;
constexpr double kWaterfillGridSlack = 1e-3;  // bits
constexpr double kKktTol = 1e-9;
constexpr double kExhaustiveRatio = 0.90;
constexpr double kGreedyParityRatio = 0.90;
constexpr double kPeakUpperFraction = 0.8;
constexpr double kSpearmanMax = -0.7;
constexpr double kSubsampleRateTol = 0.05;
constexpr double kSubsampleSpeedup = 5.0;
constexpr double kRobustnessTol = 0.05;

// Runtime budgets in seconds.
constexpr double kBudgetDet = 10.0;
constexpr double kBudgetWaterfill = 30.0;
constexpr double kBudgetGreedy = 60.0;
constexpr double kBudgetExhaustive = 300.0;
constexpr double kBudgetLocalVsRandom = 600.0;
constexpr double kBudgetParity = 900.0;
constexpr double kBudgetNeighborhood = 600.0;
constexpr double kBudgetSubsample = 900.0;
constexpr double kBudgetRobustness = 600.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

int g_failures = 0;
int g_index = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  ++g_index;
  std::printf("[%2d] %s %s: %s\n", g_index, pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

ScenarioConfig default_config() {
  return load_config(std::string(ANTSEL_SOURCE_DIR) + "/configs/default.json");
}

// ---------------------------------------------------------------------------

void determinant_identity() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng(derive_seed(11, SeedTag::kGeometry, i));
    const auto n_r = static_cast<Eigen::Index>(1 + rng.below(8));
    const auto n_ts = static_cast<Eigen::Index>(1 + rng.below(16));
    const auto h = test::random_matrix(n_r, n_ts, rng.next());
    const double f = rng.uniform(0.01, 50.0);
    const double user_sided = sum_capacity_equal_power(h, f);
    const double antenna_sided = oracle::capacity_antenna_sided(h, f);
    worst = std::max(worst, std::abs(user_sided - antenna_sided) /
                                std::max(1.0, std::abs(antenna_sided)));
  }
  const double t = seconds_since(start);
  report("determinant identity", worst <= kDetRelTol && t < kBudgetDet,
         fmt("1000 matrices, worst relative gap %.3g (tol %.0e), %.2f s (budget %.0f s)", worst,
             kDetRelTol, t, kBudgetDet));
}

void water_filling() {
  const auto start = Clock::now();
  double worst_gap = -1e300;
  double worst_kkt = 0.0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng(derive_seed(12, SeedTag::kGeometry, i));
    const std::size_t k = 1 + rng.below(6);
    std::vector<double> g(k);
    for (auto& v : g) v = std::pow(10.0, rng.uniform(-2.0, 2.0));
    const double budget = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const auto p = waterfill(g, budget);
    const int steps = k <= 3 ? 400 : (k == 4 ? 100 : (k == 5 ? 40 : 24));
    const double grid = oracle::waterfill_grid_rate(g, budget, steps);
    worst_gap = std::max(worst_gap, grid - oracle::sum_rate(p, g));

    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    worst_kkt = std::max(worst_kkt, std::abs(total - budget));
    double mu = -1.0;
    for (std::size_t j = 0; j < k; ++j)
      if (p[j] > 0.0) mu = std::max(mu, p[j] + 1.0 / g[j]);
    for (std::size_t j = 0; j < k; ++j) {
      worst_kkt = std::max(worst_kkt, std::max(0.0, -p[j]));
      if (p[j] > 0.0) worst_kkt = std::max(worst_kkt, std::abs(p[j] + 1.0 / g[j] - mu));
      else worst_kkt = std::max(worst_kkt, std::max(0.0, mu - 1.0 / g[j]));
    }
  }
  const double t = seconds_since(start);
  report("water filling", worst_gap <= kWaterfillGridSlack && worst_kkt < kKktTol &&
                              t < kBudgetWaterfill,
         fmt("200 gain vectors, max(grid - solver) %.3g bits (tol %.0e), max KKT residual "
             "%.3g (tol %.0e), %.2f s (budget %.0f s)",
             worst_gap, kWaterfillGridSlack, worst_kkt, kKktTol, t, kBudgetWaterfill));
}

void greedy_oracles() {
  const auto start = Clock::now();
  const double rho = db_to_linear(-5.0);
  int mismatches = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto h = normalize_csi(test::random_distributed_tensor(2, 8, 8, 500 + i));
    const auto sc = all_subcarriers(h);
    for (const auto control : {PowerControl::kA, PowerControl::kB}) {
      const bool b = control == PowerControl::kB;
      if (greedy_forward_path(h, 8, rho, control, sc) != oracle::greedy_forward(h, 8, b, rho, sc))
        ++mismatches;
      if (greedy_backward_path(h, 1, rho, control, sc) !=
          oracle::greedy_backward(h, 1, b, rho, sc))
        ++mismatches;
    }
  }
  const double t = seconds_since(start);
  report("greedy oracles", mismatches == 0 && t < kBudgetGreedy,
         fmt("50 instances x 2 controls x {forward, backward}, %d trajectory mismatches, "
             "%.2f s (budget %.0f s)",
             mismatches, t, kBudgetGreedy));
}

void exhaustive_gap() {
  const auto start = Clock::now();
  const double rho = db_to_linear(-5.0);
  ScenarioParams params;
  params.n_tx = 10;
  params.n_users = 4;
  params.n_scatterers = 20;
  CarrierGrid grid;
  grid.n_subcarriers = 16;
  double worst = 1e300, sum = 0.0;
  int below = 0;
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto geom = generate_geometry(params, derive_seed(13, SeedTag::kGeometry, i));
    const auto h = normalize_csi(synthesize_channel(geom, grid));
    const auto sc = all_subcarriers(h);
    const auto table = build_neighborhoods(geom.tx, 6);
    double best_local = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto lp = LocalParams::defaults(10, 6, derive_seed(13, SeedTag::kLocal, i * 8 + s));
      lp.iterations = 50;
      const auto trace = local_select(h, table, lp, rho, PowerControl::kB);
      best_local = std::max(best_local, score_selection(h, trace.committed, PowerControl::kB,
                                                        rho, sc, Metric::kEqualPower));
    }
    const double optimum = oracle::exhaustive_best(h, true, rho, sc);
    const double ratio = best_local / optimum;
    worst = std::min(worst, ratio);
    sum += ratio;
    if (ratio < kExhaustiveRatio) ++below;
  }
  const double t = seconds_since(start);
  // Every instance must reach the ratio, not just the average.
  report("exhaustive optimality gap", worst >= kExhaustiveRatio && t < kBudgetExhaustive,
         fmt("30 instances N_T=10 N_R=4, worst local/optimal %.4f (min %.2f), mean %.4f, "
             "%d below; %.2f s (budget %.0f s)",
             worst, kExhaustiveRatio, sum / 30.0, below, t, kBudgetExhaustive));
}

struct SweepData {
  ResultTable table;
  double seconds = 0.0;
};

const RunResult* find_row(const ResultTable& t, const std::string& alg, std::size_t n) {
  for (const auto& r : t.rows)
    if (r.algorithm == alg && r.n_selected == n) return &r;
  return nullptr;
}

void default_scenario_trends() {
  std::map<PowerControl, SweepData> sweeps;
  for (const auto control : {PowerControl::kA, PowerControl::kB}) {
    auto config = default_config();
    config.power_control = control;
    const auto start = Clock::now();
    sweeps[control].table = sweep_selected_count(
        config, {Algorithm::kLocal, Algorithm::kGreedyForward, Algorithm::kRandom});
    sweeps[control].seconds = seconds_since(start);
  }
  const double total_seconds = sweeps[PowerControl::kA].seconds + sweeps[PowerControl::kB].seconds;

  // Local versus the random mean at the same emergent size.
  {
    bool pass = true;
    std::string detail;
    for (const auto control : {PowerControl::kA, PowerControl::kB}) {
      const auto& t = sweeps[control].table;
      pass = pass && t.failures.empty();
      for (const auto& r : t.rows) {
        if (r.algorithm != "local") continue;
        const auto* rnd = find_row(t, "random", r.n_selected);
        const bool ok = rnd != nullptr && r.zf_rate > rnd->zf_rate;
        pass = pass && ok;
        detail += fmt("%s k=%zu N_TS=%zu %.3f vs %.3f; ", to_string(control).c_str(), *r.k,
                      r.n_selected, r.zf_rate, rnd ? rnd->zf_rate : -1.0);
      }
    }
    report("local beats random", pass && total_seconds < kBudgetLocalVsRandom,
           detail + fmt("%.1f s (budget %.0f s)", total_seconds, kBudgetLocalVsRandom));
  }

  // Local best-over-k versus greedy forward at the same size.
  {
    bool pass = true;
    std::string detail;
    for (const auto control : {PowerControl::kA, PowerControl::kB}) {
      const auto& t = sweeps[control].table;
      const RunResult* best = nullptr;
      for (const auto& r : t.rows)
        if (r.algorithm == "local" && (best == nullptr || r.zf_rate > best->zf_rate)) best = &r;
      const auto* greedy = best ? find_row(t, "greedy-forward", best->n_selected) : nullptr;
      const double ratio = greedy && greedy->zf_rate > 0.0 ? best->zf_rate / greedy->zf_rate : 0.0;
      pass = pass && ratio >= kGreedyParityRatio;
      detail += fmt("%s best local k=%zu N_TS=%zu %.3f, greedy %.3f, ratio %.3f; ",
                    to_string(control).c_str(), best ? *best->k : 0,
                    best ? best->n_selected : 0, best ? best->zf_rate : 0.0,
                    greedy ? greedy->zf_rate : 0.0, ratio);
    }
    report("local on par with greedy", pass && total_seconds < kBudgetParity,
           detail + fmt("min ratio %.2f, %.1f s (budget %.0f s)", kGreedyParityRatio,
                        total_seconds, kBudgetParity));
  }

  // Greedy forward under control B peaks inside the range.
  {
    const auto& t = sweeps[PowerControl::kB].table;
    const RunResult* peak = nullptr;
    std::size_t n_tx = 0, n_users = 0;
    for (const auto& r : t.rows) {
      if (r.algorithm != "greedy-forward") continue;
      n_tx = std::max(n_tx, r.n_selected);
      n_users = r.n_users;
      if (peak == nullptr || r.zf_rate > peak->zf_rate) peak = &r;
    }
    const double upper = kPeakUpperFraction * static_cast<double>(n_tx);
    const bool pass = peak != nullptr && peak->n_selected < n_tx &&
                      peak->n_selected >= n_users &&
                      static_cast<double>(peak->n_selected) <= upper;
    report("control B interior maximum", pass && sweeps[PowerControl::kB].seconds < kBudgetLocalVsRandom,
           fmt("greedy-forward peak %.3f at N_TS=%zu, required in [%zu, %.1f], %.1f s",
               peak ? peak->zf_rate : 0.0, peak ? peak->n_selected : 0, n_users, upper,
               sweeps[PowerControl::kB].seconds));
  }
}

void neighborhood_trend() {
  auto config = default_config();
  config.local.seeds = 5;
  const std::vector<std::size_t> k_grid{4, 8, 16, 32, 48, 63};
  const auto start = Clock::now();
  const auto study = sweep_neighborhood(config, k_grid);
  const double t = seconds_since(start);
  std::vector<double> ks, sizes;
  std::string detail;
  for (const auto k : k_grid) {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : study.rows)
      if (r.k == k) {
        sum += static_cast<double>(r.n_selected);
        ++n;
      }
    ks.push_back(static_cast<double>(k));
    sizes.push_back(n ? sum / n : 0.0);
    detail += fmt("k=%zu mean %.1f; ", k, sizes.back());
  }
  const double rs = spearman(ks, sizes);
  report("neighbourhood size trend",
         study.table.failures.empty() && rs <= kSpearmanMax && t < kBudgetNeighborhood,
         detail + fmt("Spearman %.3f (max %.1f), %.1f s (budget %.0f s)", rs, kSpearmanMax, t,
                      kBudgetNeighborhood));
}

void subcarrier_subsampling() {
  const auto config = default_config();
  const auto start = Clock::now();
  const auto cmp = compare_subcarrier_policies(config);
  const double t = seconds_since(start);
  const std::size_t c = config.carrier.n_subcarriers;
  const std::string full = SubcarrierPolicy::full().label(c);
  const std::string sub = SubcarrierPolicy::random_fraction(config.subcarrier_fraction).label(c);
  double best_full = 0.0, best_sub = 0.0, ms_full = 0.0, ms_sub = 0.0;
  for (const auto& r : cmp.rows) {
    if (r.policy == full) {
      best_full = std::max(best_full, r.zf_rate);
      ms_full += r.wall_time_ms;
    } else if (r.policy == sub) {
      best_sub = std::max(best_sub, r.zf_rate);
      ms_sub += r.wall_time_ms;
    }
  }
  const double rel = best_full > 0.0 ? std::abs(best_sub - best_full) / best_full : 1.0;
  const double speedup = ms_sub > 0.0 ? ms_full / ms_sub : 0.0;
  report("subcarrier subsampling",
         cmp.table.failures.empty() && rel <= kSubsampleRateTol &&
             speedup >= kSubsampleSpeedup && t < kBudgetSubsample,
         fmt("%s best %.3f vs %s best %.3f (rel diff %.3f, tol %.2f); local wall time %.0f ms "
             "vs %.0f ms, speed-up %.1fx (min %.0fx), %.1f s (budget %.0f s)",
             sub.c_str(), best_sub, full.c_str(), best_full, rel, kSubsampleRateTol, ms_sub,
             ms_full, speedup, kSubsampleSpeedup, t, kBudgetSubsample));
}

void csi_robustness_check() {
  auto config = default_config();
  config.local.k_grid = {16};
  const auto start = Clock::now();
  const auto study = csi_robustness(config, 0.3, 10);
  const double t = seconds_since(start);
  double clean = 0.0, perturbed = 0.0, worst_seed = 0.0;
  bool finite = true;
  for (const auto& r : study.rows) {
    clean += r.zf_clean;
    perturbed += r.zf_perturbed;
    finite = finite && std::isfinite(r.zf_clean) && std::isfinite(r.zf_perturbed);
    worst_seed = std::max(worst_seed, std::abs(r.zf_perturbed - r.zf_clean) / r.zf_clean);
  }
  const double rel = clean > 0.0 ? std::abs(perturbed - clean) / clean : 1.0;
  report("CSI robustness",
         study.table.failures.empty() && finite && study.rows.size() == 10 &&
             rel <= kRobustnessTol && t < kBudgetRobustness,
         fmt("k=16, 10 seeds, mean true-channel rate %.3f (perturbed CSI) vs %.3f (clean CSI), "
             "rel diff %.4f (tol %.2f); worst single seed %.4f; %.1f s (budget %.0f s)",
             perturbed / 10.0, clean / 10.0, rel, kRobustnessTol, worst_seed, t,
             kBudgetRobustness));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void cli_determinism() {
  const auto dir = fs::temp_directory_path() / ("antsel_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cfg = std::string(ANTSEL_SOURCE_DIR) + "/configs/default.json";
  const auto start = Clock::now();
  bool pass = true;
  std::string detail;
  for (const std::string exp : {"sweep", "neighborhood", "subcarriers", "csi"}) {
    std::vector<std::string> outputs;
    for (const auto& [tag, threads] : std::vector<std::pair<std::string, int>>{
             {"a", 1}, {"b", 1}, {"c", 4}}) {
      const auto out = dir / (exp + "_" + tag + ".csv");
      const std::string cmd = std::string(ANTSEL_CLI_PATH) + " run --config " + cfg +
                              " --experiment " + exp + " --threads " + std::to_string(threads) +
                              " --out " + out.string() + " >/dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      const bool ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
      pass = pass && ok;
      outputs.push_back(ok ? slurp(out) : std::string());
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
    pass = pass && same;
    detail += fmt("%s %s (%zu bytes); ", exp.c_str(), same ? "identical" : "DIFFERENT",
                  outputs[0].size());
  }
  fs::remove_all(dir);
  report("CLI determinism", pass,
         detail + fmt("threads 1, 1, 4; %.1f s", seconds_since(start)));
}

}  // namespace

int main() {
  try {
    determinant_identity();
    water_filling();
    greedy_oracles();
    exhaustive_gap();
    default_scenario_trends();
    neighborhood_trend();
    subcarrier_subsampling();
    csi_robustness_check();
    cli_determinism();
  } catch (const std::exception& e) {
    std::printf("FAIL: acceptance suite aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d of %d criteria passed\n", g_index - g_failures, g_index);
  return g_failures == 0 ? 0 : 1;
}
