#include "cdpinfer/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cdpinfer/errors.hpp"

namespace cdp {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<double>& CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw DataError("column '" + name + "' not found in input");
  }
  return columns[static_cast<std::size_t>(it - header.begin())];
}

bool CsvTable::has_column(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file: " + path);

  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  ++line_no;
  for (const auto& cell : split_line(line)) {
    const auto name = strip(cell);
    if (name.empty()) {
      throw DataError(path + ":1: empty column name in header");
    }
    table.header.push_back(name);
  }
  table.columns.resize(table.header.size());

  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header.size()) + " cells, found " +
                      std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto cell = strip(cells[c]);
      if (cell.empty()) {
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": missing value in column '" + table.header[c] + "'");
      }
      double value = 0.0;
      const auto* first = cell.data();
      const auto* last = cell.data() + cell.size();
      const auto res = std::from_chars(first, last, value);
      if (res.ec != std::errc() || res.ptr != last) {
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": non-numeric cell '" + cell + "' in column '" +
                        table.header[c] + "'");
      }
      table.columns[c].push_back(value);
    }
  }
  if (table.n_rows() == 0) throw DataError(path + ": no data rows");
  return table;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<double>& rows_flat, std::size_t dim) {
  if (dim == 0 || rows_flat.size() % dim != 0 || header.size() != dim) {
    throw std::invalid_argument("write_csv: header/dim mismatch");
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out << ',';
    out << header[c];
  }
  out << '\n';
  const std::size_t n = rows_flat.size() / dim;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if (c) out << ',';
      out << format_double(rows_flat[r * dim + c]);
    }
    out << '\n';
  }
  if (!out) throw DataError("failed writing output file: " + path);
}

}  // namespace cdp
