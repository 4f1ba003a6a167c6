#pragma once

#include <string>
#include <vector>

#include "gei/panel.hpp"

namespace gei {

struct CsvTable {
    std::vector<std::string> header;
    Matrix values;  ///< rows x header.size()
};

/// Parses comma-separated numeric data with a mandatory header row. Blank lines are skipped.
/// Throws DataError naming the line and column of a missing or non-numeric field.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv_file(const std::string& path);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(const std::string& text);
/// Shortest representation that parses back to the same double.
std::string csv_number(double value);

}  // namespace gei
