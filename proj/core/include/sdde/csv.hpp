#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace sdde {

/// Numeric table written as one CSV file.
struct CsvTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

using CsvMetadata = std::vector<std::pair<std::string, std::string>>;

/// 17 significant digits; nan and inf spelled out.
std::string format_double(double v);

/// Header row plus data rows, LF line endings.
std::string csv_body(const CsvTable& table);

/// `# key: value` lines followed by csv_body.
void write_csv(std::ostream& out, const CsvTable& table, const CsvMetadata& metadata);

}  // namespace sdde
