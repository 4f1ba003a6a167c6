#pragma once

#include <string>

#include "gei/inference.hpp"

namespace gei {

/// Schema identifier written into every report document.
inline constexpr const char* kReportSchema = "gei.report/1";

/// Serializes a report; doubles are written with round-trip precision.
std::string report_to_json(const StatisticReport& report, int indent = 2);

/// Inverse of report_to_json. Throws DataError on malformed documents or an unknown schema.
StatisticReport report_from_json(const std::string& text);

}  // namespace gei
