// SPDX-License-Identifier: Apache-2.0
#include "antsel/report.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <vector>

namespace antsel {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string k_field(const RunResult& r) { return r.k ? std::to_string(*r.k) : std::string(); }

}  // namespace

void write_csv(std::ostream& os, const ResultTable& table, bool include_timing) {
  os << kCsvHeader << '\n';
  for (const auto& r : table.rows) {
    os << r.algorithm << ',' << to_string(r.power_control) << ',' << r.n_users << ','
       << k_field(r) << ',' << r.policy << ',' << r.n_selected << ','
       << format_number(r.capacity_eq) << ',' << format_number(r.zf_rate) << ',' << r.seed
       << ',' << format_number(include_timing ? r.wall_time_ms : 0.0) << '\n';
  }
}

nlohmann::json table_to_json(const ResultTable& table, bool include_timing) {
  auto rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"algorithm", r.algorithm},
                    {"power_control", to_string(r.power_control)},
                    {"n_users", r.n_users},
                    {"k", r.k ? nlohmann::json(*r.k) : nlohmann::json(nullptr)},
                    {"policy", r.policy},
                    {"n_selected", r.n_selected},
                    {"capacity_eq", r.capacity_eq},
                    {"zf_rate", r.zf_rate},
                    {"seed", r.seed},
                    {"wall_time_ms", include_timing ? r.wall_time_ms : 0.0}});
  }
  auto failures = nlohmann::json::array();
  for (const auto& f : table.failures) failures.push_back({{"run", f.run}, {"error", f.message}});
  return {{"rows", rows}, {"failures", failures}};
}

void write_summary(std::ostream& os, const ResultTable& table) {
  std::vector<const RunResult*> best;
  for (const auto& r : table.rows) {
    auto it = std::find_if(best.begin(), best.end(),
                           [&](const RunResult* b) { return b->algorithm == r.algorithm; });
    if (it == best.end())
      best.push_back(&r);
    else if (r.zf_rate > (*it)->zf_rate)
      *it = &r;
  }
  for (const auto* r : best) {
    os << r->algorithm << ": best zf_rate=" << format_number(r->zf_rate)
       << " n_selected=" << r->n_selected << " n_users=" << r->n_users;
    if (r->k) os << " k=" << *r->k;
    os << " policy=" << r->policy << '\n';
  }
}

void write_trace_csv(std::ostream& os, const NeighborhoodStudy& study) {
  os << "n_users,k,seed,iteration,n_on\n";
  for (const auto& row : study.rows)
    for (std::size_t i = 0; i < row.size_trace.size(); ++i)
      os << row.n_users << ',' << row.k << ',' << row.seed << ',' << i << ','
         << row.size_trace[i] << '\n';
}

}  // namespace antsel
