// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "antsel/experiments.hpp"

namespace antsel {

inline constexpr const char* kCsvHeader =
    "algorithm,power_control,n_users,k,policy,n_selected,capacity_eq,zf_rate,seed,"
    "wall_time_ms";

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

/// RunResult rows as CSV. Without `include_timing` the wall_time_ms column
/// is written as 0 so that reruns are byte-identical.
void write_csv(std::ostream& os, const ResultTable& table, bool include_timing);

nlohmann::json table_to_json(const ResultTable& table, bool include_timing);

/// Best zf_rate row per algorithm, in first-appearance order.
void write_summary(std::ostream& os, const ResultTable& table);

void write_trace_csv(std::ostream& os, const NeighborhoodStudy& study);

}  // namespace antsel
