// SPDX-License-Identifier: Apache-2.0
#include <omp.h>

#include "antsel/kernels.hpp"

namespace antsel::kernels::omp {

void synthesize(const ScenarioGeometry& g, std::span<const double> freqs, ChannelTensor& out) {
  const auto n_tx = static_cast<std::ptrdiff_t>(g.n_tx());
  const auto pairs = static_cast<std::ptrdiff_t>(g.n_users()) * n_tx;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < pairs; ++p)
    detail::synthesize_pair(g, freqs, static_cast<std::size_t>(p / n_tx),
                            static_cast<std::size_t>(p % n_tx), out);
}

void local_proposals(const LocalProblem& p, std::span<std::uint8_t> proposals) {
  const auto n = static_cast<std::ptrdiff_t>(proposals.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    proposals[static_cast<std::size_t>(i)] =
        detail::local_proposal(p, static_cast<std::size_t>(i));
}

void subcarrier_metrics(const ChannelTensor& tensor, std::span<const std::size_t> columns,
                        double f, Metric metric, std::span<const std::size_t> subcarriers,
                        std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(subcarriers.size());
#pragma omp parallel
  {
    Eigen::MatrixXcd gram;
#pragma omp for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      gram_of_columns(tensor, subcarriers[jj], columns, {}, gram);
      out[jj] = metric_from_gram(metric, gram, columns.size(), f);
    }
  }
}

void greedy_scores(const GreedyProblem& p, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(p.candidates.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < n; ++c)
    out[static_cast<std::size_t>(c)] = detail::greedy_score(p, static_cast<std::size_t>(c));
}

}  // namespace antsel::kernels::omp
