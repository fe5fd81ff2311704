// SPDX-License-Identifier: Apache-2.0
#pragma once

// Data-parallel inner loops. Every kernel exists twice: `serial` is the
// reference, `omp` distributes the outer loop with OpenMP. Both write each
// output slot from exactly one iteration and sum in the same order, so their
// results are bit-identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "antsel/capacity.hpp"
#include "antsel/channel.hpp"
#include "antsel/geometry.hpp"
#include "antsel/selection.hpp"

namespace antsel::kernels {

struct Path {
  double amplitude;
  double length;
};

/// Unblocked paths between one antenna and one user, LOS first then
/// scatterers in index order.
std::vector<Path> propagation_paths(const ScenarioGeometry& g, std::size_t user,
                                    std::size_t tx);

/// Throws DegenerateGeometryError if any candidate path has zero length.
void check_path_lengths(const ScenarioGeometry& g);

struct LocalProblem {
  const ChannelTensor& tensor;
  const SelectionMask& flags;
  const NeighborhoodTable& table;
  double rho;
  std::span<const std::size_t> subcarriers;
  const std::vector<std::vector<std::size_t>>* user_subsets = nullptr;
};

/// Greedy candidate evaluation: gram[j] is H_S H_S^H on subcarriers[j];
/// each candidate's score is the mean capacity of gram +/- its outer product.
struct GreedyProblem {
  const ChannelTensor& tensor;
  std::span<const Eigen::MatrixXcd> grams;
  std::span<const std::size_t> subcarriers;
  std::span<const std::size_t> candidates;
  double sign;
  double f;
};

namespace serial {
void synthesize(const ScenarioGeometry& g, std::span<const double> freqs, ChannelTensor& out);
void local_proposals(const LocalProblem& p, std::span<std::uint8_t> proposals);
void subcarrier_metrics(const ChannelTensor& tensor, std::span<const std::size_t> columns,
                        double f, Metric metric, std::span<const std::size_t> subcarriers,
                        std::span<double> out);
void greedy_scores(const GreedyProblem& p, std::span<double> out);
}  // namespace serial

namespace omp {
void synthesize(const ScenarioGeometry& g, std::span<const double> freqs, ChannelTensor& out);
void local_proposals(const LocalProblem& p, std::span<std::uint8_t> proposals);
void subcarrier_metrics(const ChannelTensor& tensor, std::span<const std::size_t> columns,
                        double f, Metric metric, std::span<const std::size_t> subcarriers,
                        std::span<double> out);
void greedy_scores(const GreedyProblem& p, std::span<double> out);
}  // namespace omp

/// Shared per-item bodies.
namespace detail {
void synthesize_pair(const ScenarioGeometry& g, std::span<const double> freqs,
                     std::size_t user, std::size_t tx, ChannelTensor& out);
std::uint8_t local_proposal(const LocalProblem& p, std::size_t antenna);
double greedy_score(const GreedyProblem& p, std::size_t candidate);
}  // namespace detail

}  // namespace antsel::kernels
