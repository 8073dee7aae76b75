#pragma once

// CSV output: comma separated, LF line endings, one header row, reals as
// "%.8e" (nine significant digits).

#include <string>
#include <string_view>
#include <vector>

namespace nonmarkov {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Appends a row of reals; the count must match the header.
  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> cells);
  /// Column `name` parsed back as reals.
  std::vector<double> column(std::string_view name) const;
};

std::string format_real(double v);
std::string to_csv(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);
/// Inverse of to_csv for unquoted cells.
CsvTable parse_csv(std::string_view text);

}  // namespace nonmarkov
