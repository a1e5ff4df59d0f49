#include "curvq/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "curvq/error.hpp"

namespace curvq {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& s, const std::string& where) {
  if (s.empty()) throw DomainError(where + ": empty field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw DomainError(where + ": '" + s + "' is not a finite number");
  }
  return v;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DomainError("CSV: missing column '" + name + "'");
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open '" + path + "' for writing");
  write_csv(f, table);
  if (!f) throw DomainError("write to '" + path + "' failed");
}

void write_table_json(const std::string& path, const CsvTable& table) {
  nlohmann::json j;
  j["header"] = table.header;
  j["rows"] = table.rows;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open '" + path + "' for writing");
  f << j.dump(1) << '\n';
}

CsvTable read_csv(std::istream& in, const std::string& source) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[0] == '#') continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    const std::string where = source + ":" + std::to_string(lineno);
    if (cells.size() != t.header.size()) {
      throw DomainError(where + ": expected " + std::to_string(t.header.size()) + " fields");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c, where));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw DomainError(source + ": empty CSV");
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open '" + path + "'");
  return read_csv(f, path);
}

std::vector<std::pair<double, double>> read_pairs(const std::string& path,
                                                  const std::string& first,
                                                  const std::string& second) {
  const CsvTable t = read_csv(path);
  const std::size_t a = t.column(first), b = t.column(second);
  std::vector<std::pair<double, double>> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.emplace_back(r[a], r[b]);
  return out;
}

}  // namespace curvq
