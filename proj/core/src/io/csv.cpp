#include "biocircuit/io/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace biocircuit::io {
namespace {

bool valid_column_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

void CsvTable::validate() const {
  if (header.empty()) throw EmptySeries("table has no columns");
  if (rows.empty()) throw EmptySeries("table has no rows");
  for (const std::string& name : header)
    if (!valid_column_name(name))
      throw std::invalid_argument("column name '" + name + "' must match [a-z0-9_]+");
  for (const auto& row : rows)
    if (row.size() != header.size())
      throw std::invalid_argument("table is not rectangular");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string emit_csv(const CsvTable& table) {
  table.validate();
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out += ',';
    out += table.header[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      std::vector<double> row;
      row.reserve(cells.size());
      for (const std::string& cell : cells) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end != cell.c_str() + cell.size())
          throw std::invalid_argument("non-numeric CSV cell '" + cell + "'");
        row.push_back(v);
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace biocircuit::io
