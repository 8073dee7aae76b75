#include "nonmarkov/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "nonmarkov/errors.hpp"

namespace nonmarkov {

namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_real(v));
  add_row(std::move(cells));
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header.size()) {
    throw ValidationError(ErrorCode::DimensionMismatch, "row width does not match the header");
  }
  for (const auto& c : cells) {
    if (c.find_first_of(",\n") != std::string::npos) {
      throw ValidationError(ErrorCode::InvalidArgument, "cell '" + c + "' needs quoting");
    }
  }
  rows.push_back(std::move(cells));
}

std::vector<double> CsvTable::column(std::string_view name) const {
  std::size_t idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) idx = i;
  if (idx == header.size()) {
    throw ValidationError(ErrorCode::InvalidArgument, "no column " + std::string(name));
  }
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(std::strtod(r[idx].c_str(), nullptr));
  return out;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(table.header);
  for (const auto& r : table.rows) emit(r);
  return out;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError(ErrorCode::Config, "cannot write " + path);
  out << to_csv(table);
  if (!out) throw ValidationError(ErrorCode::Config, "failed writing " + path);
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool first = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (first) {
      table.header = split(line);
      first = false;
    } else {
      table.add_row(split(line));
    }
  }
  return table;
}

}  // namespace nonmarkov
