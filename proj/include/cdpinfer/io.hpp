#pragma once

#include <string>
#include <vector>

namespace cdp {

/// Column-major numeric table read from a headered CSV file.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t n_rows() const { return columns.empty() ? 0 : columns[0].size(); }
  const std::vector<double>& column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

/// Reads a UTF-8 CSV with a header row and '.' decimal separator. Missing or
/// non-numeric cells raise DataError with the offending line number.
CsvTable read_csv(const std::string& path);

/// Writes rows (row-major, n x dim) with a header; doubles are printed with
/// 17 significant digits so values round-trip exactly.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<double>& rows_flat, std::size_t dim);

std::string format_double(double x);

}  // namespace cdp
