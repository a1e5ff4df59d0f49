#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace curvq {

/// Column-named numeric table with a one-line CSV header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;  ///< DomainError when absent
};

/// Fixed scientific formatting, 16 significant digits.
std::string format_number(double v);

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);
/// {"header": [...], "rows": [[...], ...]}
void write_table_json(const std::string& path, const CsvTable& table);

CsvTable read_csv(std::istream& in, const std::string& source = "<stream>");
CsvTable read_csv(const std::string& path);

/// Two named columns from a CSV file (e.g. "rho","f" or "rho","U"), rows in file order.
std::vector<std::pair<double, double>> read_pairs(const std::string& path,
                                                  const std::string& first,
                                                  const std::string& second);

}  // namespace curvq
