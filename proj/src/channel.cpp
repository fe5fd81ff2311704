// SPDX-License-Identifier: Apache-2.0
#include "antsel/channel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "antsel/errors.hpp"
#include "antsel/kernels.hpp"
#include "antsel/rng.hpp"

namespace antsel {

void CarrierGrid::validate() const {
  if (n_subcarriers < 1) throw ParameterError("n_subcarriers must be at least 1");
  if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
    throw ParameterError("carrier frequency must be positive");
  if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz))
    throw ParameterError("bandwidth must be positive");
  if (bandwidth_hz / 2.0 >= carrier_hz) throw ParameterError("bandwidth exceeds twice the carrier");
}

std::vector<double> CarrierGrid::frequencies() const {
  validate();
  if (n_subcarriers == 1) return {carrier_hz};
  std::vector<double> f(n_subcarriers);
  const double low = carrier_hz - bandwidth_hz / 2.0;
  const double step = bandwidth_hz / static_cast<double>(n_subcarriers - 1);
  for (std::size_t s = 0; s < n_subcarriers; ++s) f[s] = low + step * static_cast<double>(s);
  return f;
}

ChannelTensor::ChannelTensor(std::size_t n_users, std::size_t n_tx, std::size_t n_subcarriers)
    : n_users_(n_users),
      n_tx_(n_tx),
      n_subcarriers_(n_subcarriers),
      data_(n_users * n_tx * n_subcarriers) {}

double ChannelTensor::mean_power() const {
  if (data_.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& h : data_) acc += std::norm(h);
  return acc / static_cast<double>(data_.size());
}

void PerturbationSpec::validate() const {
  if (!(relative_magnitude >= 0.0 && relative_magnitude < 1.0))
    throw ParameterError("perturbation magnitude must lie in [0, 1)");
}

ChannelTensor synthesize_channel(const ScenarioGeometry& geometry, const CarrierGrid& grid) {
  geometry.validate();
  const auto freqs = grid.frequencies();
  kernels::check_path_lengths(geometry);
  ChannelTensor out(geometry.n_users(), geometry.n_tx(), freqs.size());
  kernels::omp::synthesize(geometry, freqs, out);
  return out;
}

ChannelTensor normalize_csi(const ChannelTensor& tensor) {
  for (const auto& h : tensor.entries())
    if (!std::isfinite(h.real()) || !std::isfinite(h.imag()))
      throw InvalidInputError("channel tensor has non-finite entries");
  const double power = tensor.mean_power();
  if (!(power > 0.0)) throw NormalizationError("cannot normalize an all-zero channel tensor");
  ChannelTensor out = tensor;
  const double scale = 1.0 / std::sqrt(power);
  for (auto& h : out.entries()) h *= scale;
  out.set_normalized(true);
  return out;
}

ChannelTensor perturb_csi(const ChannelTensor& tensor, const PerturbationSpec& spec) {
  spec.validate();
  ChannelTensor out = tensor;
  if (spec.relative_magnitude == 0.0) return out;
  Rng rng(spec.seed);
  const double m = spec.relative_magnitude;
  for (std::size_t r = 0; r < tensor.n_users(); ++r)
    for (std::size_t t = 0; t < tensor.n_tx(); ++t)
      for (std::size_t s = 0; s < tensor.n_subcarriers(); ++s)
        out.at(r, t, s) *= 1.0 + rng.uniform(-m, m);
  return out;
}

std::vector<std::size_t> select_subcarriers_random(std::size_t total, double fraction,
                                                   std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ParameterError("subcarrier fraction must lie in (0, 1]");
  const auto m = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
  if (m == 0) throw EmptyInputError("subcarrier fraction rounds to an empty subset");
  Rng rng(seed);
  auto picked = rng.sample(total, m);
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<std::size_t> select_subcarriers_strongest(const ChannelTensor& tensor,
                                                      std::size_t count) {
  const std::size_t c = tensor.n_subcarriers();
  if (count < 1 || count > c) throw ParameterError("strongest count must lie in [1, c]");
  std::vector<double> power(c, 0.0);
  const std::size_t per_sc = tensor.n_users() * tensor.n_tx();
  for (std::size_t s = 0; s < c; ++s) {
    double acc = 0.0;
    for (std::size_t t = 0; t < tensor.n_tx(); ++t)
      for (const auto& h : tensor.column(s, t)) acc += std::norm(h);
    power[s] = acc / static_cast<double>(per_sc);
  }
  std::vector<std::size_t> order(c);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return power[a] > power[b]; });
  order.resize(count);
  return order;
}

std::vector<std::size_t> all_subcarriers(const ChannelTensor& tensor) {
  std::vector<std::size_t> idx(tensor.n_subcarriers());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw FormatError("truncated tensor header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw FormatError("truncated tensor payload");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void write_tensor(std::ostream& os, const ChannelTensor& tensor) {
  put_u32(os, kTensorMagic);
  put_u32(os, kTensorVersion);
  put_u32(os, static_cast<std::uint32_t>(tensor.n_users()));
  put_u32(os, static_cast<std::uint32_t>(tensor.n_tx()));
  put_u32(os, static_cast<std::uint32_t>(tensor.n_subcarriers()));
  for (std::size_t r = 0; r < tensor.n_users(); ++r)
    for (std::size_t t = 0; t < tensor.n_tx(); ++t)
      for (std::size_t s = 0; s < tensor.n_subcarriers(); ++s) {
        const cplx h = tensor.at(r, t, s);
        put_f64(os, h.real());
        put_f64(os, h.imag());
      }
}

ChannelTensor read_tensor(std::istream& is) {
  if (get_u32(is) != kTensorMagic) throw FormatError("bad tensor magic");
  if (const auto v = get_u32(is); v != kTensorVersion)
    throw FormatError("unsupported tensor version " + std::to_string(v));
  const std::size_t n_users = get_u32(is);
  const std::size_t n_tx = get_u32(is);
  const std::size_t c = get_u32(is);
  ChannelTensor out(n_users, n_tx, c);
  for (std::size_t r = 0; r < n_users; ++r)
    for (std::size_t t = 0; t < n_tx; ++t)
      for (std::size_t s = 0; s < c; ++s) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        out.at(r, t, s) = {re, im};
      }
  out.set_normalized(out.entries().size() > 0 && std::abs(out.mean_power() - 1.0) <= 1e-9);
  return out;
}

void write_tensor_file(const std::string& path, const ChannelTensor& tensor) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_tensor(os, tensor);
  if (!os) throw Error("failed writing " + path);
}

ChannelTensor read_tensor_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  return read_tensor(is);
}

}  // namespace antsel
