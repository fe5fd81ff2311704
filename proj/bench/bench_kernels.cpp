// SPDX-License-Identifier: Apache-2.0
//
// Serial versus OpenMP kernels on the default 64-antenna scenario.
//
//   bench_kernels [--reps N] [--threads T]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include <CLI11.hpp>

#include "antsel/kernels.hpp"
#include "antsel/selection.hpp"

using namespace antsel;

namespace {

double best_ms(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-20s %10.2f %10.2f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP kernel timings"};
  int reps = 3;
  int threads = omp_get_max_threads();
  app.add_option("--reps", reps, "Repetitions (best is reported)")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  omp_set_num_threads(threads);

  const ScenarioParams params;
  const CarrierGrid grid;
  const auto g = generate_geometry(params, 1);
  const auto freqs = grid.frequencies();
  const double rho = db_to_linear(-5.0);

  ChannelTensor raw(g.n_users(), g.n_tx(), freqs.size());
  std::printf("N_T=%zu N_R=%zu c=%zu threads=%d reps=%d\n", g.n_tx(), g.n_users(), freqs.size(),
              threads, reps);
  std::printf("%-20s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speed-up");

  row("synthesize", best_ms(reps, [&] { kernels::serial::synthesize(g, freqs, raw); }),
      best_ms(reps, [&] { kernels::omp::synthesize(g, freqs, raw); }));
  const auto h = normalize_csi(raw);
  const auto sc = all_subcarriers(h);

  std::vector<std::size_t> cols(32);
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = 2 * i;
  std::vector<double> metrics(sc.size());
  for (const auto metric : {Metric::kEqualPower, Metric::kZfWaterfilling}) {
    row(metric == Metric::kEqualPower ? "metrics (eq-power)" : "metrics (zf-wf)",
        best_ms(reps, [&] {
          kernels::serial::subcarrier_metrics(h, cols, 0.1, metric, sc, metrics);
        }),
        best_ms(reps, [&] {
          kernels::omp::subcarrier_metrics(h, cols, 0.1, metric, sc, metrics);
        }));
  }

  const auto table = build_neighborhoods(g.tx, 16);
  Rng rng(7);
  const auto flags = SelectionMask::from_indices(g.n_tx(), rng.sample(g.n_tx(), 32));
  const kernels::LocalProblem lp{h, flags, table, rho, sc};
  std::vector<std::uint8_t> proposals(g.n_tx());
  row("local proposals", best_ms(reps, [&] { kernels::serial::local_proposals(lp, proposals); }),
      best_ms(reps, [&] { kernels::omp::local_proposals(lp, proposals); }));

  std::vector<Eigen::MatrixXcd> grams(sc.size());
  for (std::size_t j = 0; j < sc.size(); ++j) gram_of_columns(h, sc[j], cols, {}, grams[j]);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i < g.n_tx(); i += 2) candidates.push_back(i);
  const kernels::GreedyProblem gp{h, grams, sc, candidates, 1.0, rho * 8.0};
  std::vector<double> scores(candidates.size());
  row("greedy scores", best_ms(reps, [&] { kernels::serial::greedy_scores(gp, scores); }),
      best_ms(reps, [&] { kernels::omp::greedy_scores(gp, scores); }));
  return 0;
}
