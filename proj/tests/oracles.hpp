// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent reference computations. Nothing here calls the library's
// capacity, water-filling or selection code: determinants go through Eigen's
// LU, power splits through grid search, selections through brute force.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "antsel/channel.hpp"
#include "antsel/geometry.hpp"
#include "support.hpp"

namespace antsel::oracle {

/// log2 det(I_{N_TS} + (f / N_R) H^H H) by LU, the antenna-sided form.
inline double capacity_antenna_sided(const Eigen::MatrixXcd& h, double f) {
  if (h.cols() == 0) return 0.0;
  const double a = f / static_cast<double>(h.rows());
  const Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Identity(h.cols(), h.cols()) + a * (h.adjoint() * h);
  return std::log2(std::abs(m.partialPivLu().determinant()));
}

/// log2 det(I_{N_R} + (f / N_R) H H^H) by LU.
inline double capacity_user_sided(const Eigen::MatrixXcd& h, double f) {
  if (h.cols() == 0) return 0.0;
  const double a = f / static_cast<double>(h.rows());
  const Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Identity(h.rows(), h.rows()) + a * (h * h.adjoint());
  return std::log2(std::abs(m.partialPivLu().determinant()));
}

inline double sum_rate(std::span<const double> p, std::span<const double> g) {
  double r = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) r += std::log2(1.0 + p[i] * g[i]);
  return r;
}

/// Best rate over the simplex grid {p : p_i = budget * n_i / steps, sum n_i <= steps}.
inline double waterfill_grid_rate(std::span<const double> gains, double budget, int steps) {
  const std::size_t k = gains.size();
  std::vector<int> n(k, 0);
  std::vector<double> p(k, 0.0);
  double best = 0.0;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == k) {
      n[i] = left;  // spend everything; the rate is increasing in each p_i
      for (std::size_t m = 0; m < k; ++m) p[m] = budget * n[m] / steps;
      best = std::max(best, sum_rate(p, gains));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      n[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, steps);
  return best;
}

/// ZF per-user gains 1 / [(H H^H)^{-1}]_rr through an explicit inverse.
inline std::vector<double> zf_gains(const Eigen::MatrixXcd& h) {
  const Eigen::MatrixXcd inv = (h * h.adjoint()).inverse();
  std::vector<double> g(static_cast<std::size_t>(h.rows()));
  for (Eigen::Index r = 0; r < h.rows(); ++r) g[static_cast<std::size_t>(r)] = 1.0 / inv(r, r).real();
  return g;
}

/// Two-user ZF rate by grid search over the split p_1 in [0, f].
inline double zf_two_user_grid(const Eigen::MatrixXcd& h, double f, double step_fraction) {
  const auto g = zf_gains(h);
  double best = 0.0;
  const int steps = static_cast<int>(std::llround(1.0 / step_fraction));
  for (int i = 0; i <= steps; ++i) {
    const double p1 = f * i / steps;
    const double p[2] = {p1, f - p1};
    best = std::max(best, sum_rate(p, g));
  }
  return best;
}

/// k nearest neighbours by full sort of (distance, index).
inline std::vector<std::vector<std::size_t>> knn(std::span<const Point3> pts, std::size_t k) {
  std::vector<std::vector<std::size_t>> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y, dz = pts[i].z - pts[j].z;
      d.emplace_back(std::sqrt(dx * dx + dy * dy + dz * dz), j);
    }
    std::sort(d.begin(), d.end());
    for (std::size_t m = 0; m < k; ++m) out[i].push_back(d[m].second);
  }
  return out;
}

/// Mean equal-power capacity over subcarriers of the given columns, via LU.
inline double mean_capacity(const ChannelTensor& t, const std::vector<std::size_t>& cols,
                            bool control_b, double rho, std::span<const std::size_t> sc) {
  if (cols.empty()) return 0.0;
  const double n_r = static_cast<double>(t.n_users());
  const double f = control_b ? rho * n_r / static_cast<double>(cols.size()) : rho * n_r;
  double acc = 0.0;
  for (const auto s : sc) acc += capacity_user_sided(test::columns_of(t, s, cols), f);
  return acc / static_cast<double>(sc.size());
}

/// Greedy forward trajectory re-evaluating every candidate from scratch.
inline std::vector<std::size_t> greedy_forward(const ChannelTensor& t, std::size_t n_target,
                                               bool control_b, double rho,
                                               std::span<const std::size_t> sc) {
  std::vector<std::size_t> chosen;
  while (chosen.size() < n_target) {
    std::size_t best = t.n_tx();
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < t.n_tx(); ++c) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      auto cols = chosen;
      cols.push_back(c);
      std::sort(cols.begin(), cols.end());
      const double v = mean_capacity(t, cols, control_b, rho, sc);
      if (v > best_val) {
        best_val = v;
        best = c;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

/// Greedy backward removal order re-evaluating every candidate from scratch.
inline std::vector<std::size_t> greedy_backward(const ChannelTensor& t, std::size_t n_target,
                                                bool control_b, double rho,
                                                std::span<const std::size_t> sc) {
  std::vector<std::size_t> remaining(t.n_tx());
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  std::vector<std::size_t> removed;
  while (remaining.size() > n_target) {
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      auto cols = remaining;
      cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(i));
      const double v = mean_capacity(t, cols, control_b, rho, sc);
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    removed.push_back(remaining[best]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return removed;
}

/// Best mean capacity over all 2^N_T subsets.
inline double exhaustive_best(const ChannelTensor& t, bool control_b, double rho,
                              std::span<const std::size_t> sc) {
  double best = 0.0;
  const std::size_t n = t.n_tx();
  for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < n; ++i)
      if (bits >> i & 1U) cols.push_back(i);
    best = std::max(best, mean_capacity(t, cols, control_b, rho, sc));
  }
  return best;
}

}  // namespace antsel::oracle
