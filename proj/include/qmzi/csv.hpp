#pragma once

#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmzi {

// Rectangular numeric table. Missing values (optional without a value) render
// as empty fields, marking grid cells outside the reachable domain.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;
};

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace detail

// Serialize with comma separators, LF line endings, and a trailing newline.
// Numbers use %.12g so output is byte-stable across runs.
inline std::string to_csv(const CsvTable& table) {
  if (table.header.empty()) throw std::invalid_argument("to_csv: table has no columns");
  std::string out;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j) out += ',';
    out += table.header[j];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("to_csv: row has " + std::to_string(row.size()) +
                                  " fields, header has " + std::to_string(table.header.size()));
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      if (row[j]) out += detail::format_number(*row[j]);
    }
    out += '\n';
  }
  return out;
}

// Minimal reader for the tables written above: first line is the header,
// fields are unquoted numbers or empty.
inline CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.eof()) break;
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(field);
        field.clear();
      } else {
        field += ch;
      }
    }
    fields.push_back(field);
    if (first) {
      table.header = fields;
      first = false;
      continue;
    }
    std::vector<std::optional<double>> row;
    row.reserve(fields.size());
    for (const std::string& f : fields) {
      if (f.empty()) {
        row.emplace_back(std::nullopt);
        continue;
      }
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(f, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument("parse_csv: field '" + f + "' is not numeric");
      }
      if (pos != f.size())
        throw std::invalid_argument("parse_csv: trailing characters in field '" + f + "'");
      row.emplace_back(v);
    }
    if (row.size() != table.header.size())
      throw std::invalid_argument("parse_csv: row width " + std::to_string(row.size()) +
                                  " does not match header width " +
                                  std::to_string(table.header.size()));
    table.rows.push_back(std::move(row));
  }
  if (first) throw std::invalid_argument("parse_csv: no header line");
  return table;
}

}  // namespace qmzi
