#pragma once

#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <fmt/format.h>

#include "powerbuf/errors.hpp"

namespace powerbuf {

// Numeric CSV table: header row, comma separator, '.' decimal point.
// Each column carries the number of decimals it is printed with.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<int> decimals;
  std::vector<std::vector<double>> rows;

  void add_column(std::string name, int digits) {
    header.push_back(std::move(name));
    decimals.push_back(digits);
  }
};

inline std::string format_fixed(double value, int decimals) {
  return fmt::format("{:.{}f}", value, decimals);
}

inline void write_csv(std::ostream& os, const CsvTable& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw precondition_error("CSV row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << format_fixed(row[i], t.decimals[i]);
    }
    os << '\n';
  }
}

inline std::string to_csv(const CsvTable& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

inline double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw config_error("not a number: '" + std::string(text) + "'");
  }
  return value;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = line.find(sep);
    out.push_back(line.substr(0, pos));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return out;
}

/// Reads a table written by write_csv. Decimals are inferred per column from
/// the first data row.
inline CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw config_error("CSV input is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  for (auto name : split(line, ',')) t.header.emplace_back(name);
  t.decimals.assign(t.header.size(), 0);
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != t.header.size()) throw config_error("CSV row width does not match header");
    if (t.rows.empty()) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto dot = cells[i].find('.');
        t.decimals[i] = dot == std::string_view::npos ? 0 : static_cast<int>(cells[i].size() - dot - 1);
      }
    }
    auto& row = t.rows.emplace_back();
    for (auto cell : cells) row.push_back(parse_double(cell));
  }
  return t;
}

}  // namespace powerbuf
