// SPDX-License-Identifier: Apache-2.0
#include "antsel/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "antsel/errors.hpp"
#include "antsel/kernels.hpp"

namespace antsel {

std::string to_string(PowerControl pc) { return pc == PowerControl::kA ? "A" : "B"; }

PowerControl power_control_from_string(const std::string& s) {
  if (s == "A" || s == "a") return PowerControl::kA;
  if (s == "B" || s == "b") return PowerControl::kB;
  throw ParameterError("unknown power control '" + s + "' (expected A or B)");
}

SelectionMask SelectionMask::all(std::size_t n_total) {
  SelectionMask m(n_total);
  std::fill(m.bits_.begin(), m.bits_.end(), std::uint8_t{1});
  return m;
}

SelectionMask SelectionMask::from_indices(std::size_t n_total,
                                          std::span<const std::size_t> on) {
  SelectionMask m(n_total);
  for (auto i : on) {
    if (i >= n_total) throw ParameterError("mask index out of range");
    m.bits_[i] = 1;
  }
  return m;
}

std::size_t SelectionMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> SelectionMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(i);
  return out;
}

std::string SelectionMask::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

double power_factor(PowerControl control, double rho, std::size_t n_ts, std::size_t n_r) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ParameterError("rho must be positive");
  if (n_r < 1) throw ParameterError("n_r must be at least 1");
  const double base = rho * static_cast<double>(n_r);
  if (control == PowerControl::kA) return base;
  if (n_ts == 0) throw ParameterError("power control B is undefined for an empty selection");
  return base / static_cast<double>(n_ts);
}

double log2det_identity_plus(const Eigen::MatrixXcd& gram, double scale) {
  const auto n = static_cast<std::size_t>(gram.rows());
  if (n == 0) return 0.0;
  // In-place Cholesky of I + scale * gram on the lower triangle; the log
  // determinant is the sum of the log pivots. Called in the innermost loops,
  // so the buffer is per thread and the arithmetic is spelled out in reals.
  thread_local std::vector<double> re;
  thread_local std::vector<double> im;
  re.resize(n * n);
  im.resize(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i) {
      const cplx g = gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      re[i * n + j] = scale * g.real() + (i == j ? 1.0 : 0.0);
      im[i * n + j] = scale * g.imag();
    }
  double log_det = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double d = re[j * n + j];
    for (std::size_t k = 0; k < j; ++k)
      d -= re[j * n + k] * re[j * n + k] + im[j * n + k] * im[j * n + k];
    if (!(d > 0.0)) {
      const Eigen::MatrixXcd m =
          Eigen::MatrixXcd::Identity(gram.rows(), gram.cols()) + scale * gram;
      return std::max(0.0, std::log2(std::abs(m.partialPivLu().determinant())));
    }
    log_det += std::log(d);
    const double inv_pivot = 1.0 / std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double xr = re[i * n + j];
      double xi = im[i * n + j];
      for (std::size_t k = 0; k < j; ++k) {
        // x -= L(i,k) * conj(L(j,k))
        const double ar = re[i * n + k], ai = im[i * n + k];
        const double br = re[j * n + k], bi = im[j * n + k];
        xr -= ar * br + ai * bi;
        xi -= ai * br - ar * bi;
      }
      re[i * n + j] = xr * inv_pivot;
      im[i * n + j] = xi * inv_pivot;
    }
  }
  return std::max(0.0, log_det / std::log(2.0));
}

double capacity_from_gram(const Eigen::MatrixXcd& gram, double f) {
  if (gram.rows() == 0) return 0.0;
  return log2det_identity_plus(gram, f / static_cast<double>(gram.rows()));
}

std::vector<double> waterfill(std::span<const double> gains, double budget) {
  if (gains.empty()) throw EmptyInputError("water filling needs at least one gain");
  if (!(budget > 0.0) || !std::isfinite(budget))
    throw ParameterError("water-filling budget must be positive");
  const std::size_t k = gains.size();
  std::vector<double> floor(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(gains[i] > 0.0) || !std::isfinite(gains[i]))
      throw InvalidInputError("water-filling gains must be positive and finite");
    floor[i] = 1.0 / gains[i];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return floor[a] < floor[b]; });

  // Drop the weakest channel until the water level clears every active floor.
  std::size_t active = k;
  double level = 0.0;
  for (; active >= 1; --active) {
    double sum = budget;
    for (std::size_t i = 0; i < active; ++i) sum += floor[order[i]];
    level = sum / static_cast<double>(active);
    if (level > floor[order[active - 1]]) break;
  }
  std::vector<double> power(k, 0.0);
  for (std::size_t i = 0; i < active; ++i) power[order[i]] = level - floor[order[i]];
  return power;
}

double zf_rate_from_gram(const Eigen::MatrixXcd& gram, std::size_t n_ts, double f) {
  const auto n_r = static_cast<std::size_t>(gram.rows());
  if (n_r == 0 || n_ts < n_r) return 0.0;
  thread_local Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig;
  thread_local Eigen::LLT<Eigen::MatrixXcd> llt;
  thread_local Eigen::MatrixXcd inv;
  eig.compute(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return 0.0;
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmax > 0.0) || !(lmin > 0.0) || lmax / lmin > kZfConditionLimit) return 0.0;

  llt.compute(gram);
  if (llt.info() != Eigen::Success) return 0.0;
  inv.setIdentity(gram.rows(), gram.cols());
  llt.solveInPlace(inv);
  std::vector<double> gains(n_r);
  for (std::size_t r = 0; r < n_r; ++r) {
    const double d = inv(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)).real();
    if (!(d > 0.0)) return 0.0;
    gains[r] = 1.0 / d;
  }
  const auto power = waterfill(gains, f);
  double rate = 0.0;
  for (std::size_t r = 0; r < n_r; ++r) rate += std::log2(1.0 + power[r] * gains[r]);
  return rate;
}

namespace {

void require_finite(const Eigen::MatrixXcd& h) {
  if (!h.allFinite()) throw InvalidInputError("channel matrix has non-finite entries");
}

}  // namespace

double sum_capacity_equal_power(const Eigen::MatrixXcd& h_sub, double f) {
  require_finite(h_sub);
  if (!(f > 0.0)) throw ParameterError("power factor must be positive");
  if (h_sub.cols() == 0 || h_sub.rows() == 0) return 0.0;
  const Eigen::MatrixXcd gram = h_sub * h_sub.adjoint();
  return capacity_from_gram(gram, f);
}

double zf_waterfilling_rate(const Eigen::MatrixXcd& h_sub, double f) {
  require_finite(h_sub);
  if (!(f > 0.0)) throw ParameterError("power factor must be positive");
  if (h_sub.cols() < h_sub.rows() || h_sub.rows() == 0) return 0.0;
  const Eigen::MatrixXcd gram = h_sub * h_sub.adjoint();
  return zf_rate_from_gram(gram, static_cast<std::size_t>(h_sub.cols()), f);
}

void gram_of_columns(const ChannelTensor& tensor, std::size_t sc,
                     std::span<const std::size_t> columns,
                     std::span<const std::size_t> users, Eigen::MatrixXcd& gram) {
  const std::size_t n = users.empty() ? tensor.n_users() : users.size();
  gram.setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  thread_local std::vector<double> hr;
  thread_local std::vector<double> hi;
  hr.resize(n);
  hi.resize(n);
  cplx* g = gram.data();
  for (const std::size_t t : columns) {
    const auto col = tensor.column(sc, t);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx v = users.empty() ? col[i] : col[users[i]];
      hr[i] = v.real();
      hi[i] = v.imag();
    }
    // Lower triangle: g(i, j) += h_i * conj(h_j).
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j; i < n; ++i)
        g[j * n + i] += cplx(hr[i] * hr[j] + hi[i] * hi[j], hi[i] * hr[j] - hr[i] * hi[j]);
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) g[i * n + j] = std::conj(g[j * n + i]);
}

void add_outer(const ChannelTensor& tensor, std::size_t sc, std::size_t tx,
               std::span<const std::size_t> users, double sign, Eigen::MatrixXcd& gram) {
  const auto col = tensor.column(sc, tx);
  const auto n = static_cast<std::size_t>(gram.rows());
  auto h = [&](std::size_t i) { return users.empty() ? col[i] : col[users[i]]; };
  cplx* g = gram.data();
  for (std::size_t j = 0; j < n; ++j) {
    const cplx hj = h(j);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx hi = h(i);
      g[j * n + i] += cplx(sign * (hi.real() * hj.real() + hi.imag() * hj.imag()),
                           sign * (hi.imag() * hj.real() - hi.real() * hj.imag()));
    }
  }
}

double metric_from_gram(Metric metric, const Eigen::MatrixXcd& gram, std::size_t n_ts,
                        double f) {
  if (n_ts == 0) return 0.0;
  return metric == Metric::kEqualPower ? capacity_from_gram(gram, f)
                                       : zf_rate_from_gram(gram, n_ts, f);
}

namespace {

std::vector<std::size_t> checked_sorted(const ChannelTensor& tensor,
                                        std::span<const std::size_t> subcarriers) {
  if (subcarriers.empty()) throw EmptyInputError("subcarrier list is empty");
  std::vector<std::size_t> sorted(subcarriers.begin(), subcarriers.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.back() >= tensor.n_subcarriers())
    throw ParameterError("subcarrier index out of range");
  return sorted;
}

}  // namespace

double score_selection(const ChannelTensor& tensor, const SelectionMask& mask,
                       PowerControl control, double rho,
                       std::span<const std::size_t> subcarriers, Metric metric) {
  if (mask.size() != tensor.n_tx()) throw ParameterError("mask length does not match N_T");
  const auto sorted = checked_sorted(tensor, subcarriers);
  const auto columns = mask.indices();
  if (columns.empty()) return 0.0;
  const double f = power_factor(control, rho, columns.size(), tensor.n_users());
  std::vector<double> values(sorted.size());
  kernels::omp::subcarrier_metrics(tensor, columns, f, metric, sorted, values);
  double acc = 0.0;
  for (const double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

CapacityReport evaluate_selection(const ChannelTensor& tensor, const SelectionMask& mask,
                                  PowerControl control, double rho,
                                  std::span<const std::size_t> subcarriers) {
  CapacityReport r;
  r.equal_power_capacity =
      score_selection(tensor, mask, control, rho, subcarriers, Metric::kEqualPower);
  r.zf_waterfilling_rate =
      score_selection(tensor, mask, control, rho, subcarriers, Metric::kZfWaterfilling);
  r.n_selected = mask.count();
  r.power_control = control;
  r.subcarrier_indices.assign(subcarriers.begin(), subcarriers.end());
  return r;
}

}  // namespace antsel
