#pragma once

// Comma-separated numeric tables: '.' decimal point, '\n' rows, UTF-8.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "profex/hyperplane.hpp"

namespace profex {

struct CsvTable {
  std::vector<std::string> header;  ///< empty when the input had none
  Matrix values;
};

enum class HeaderMode {
  Required,  ///< first row is always a header
  Optional,  ///< first row is a header iff it does not parse as numbers
};

CsvTable parse_csv(std::string_view text, HeaderMode mode = HeaderMode::Required);
CsvTable read_csv(const std::filesystem::path& path, HeaderMode mode = HeaderMode::Required);

/// Shortest representation that parses back to the same double.
std::string format_number(double value);

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& values);

}  // namespace profex
