#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace biocircuit::io {

struct EmptySeries : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rectangular numeric table. Column names match [a-z0-9_]+; the first
/// column is the independent variable. Values render with 17 significant
/// digits so a re-parse recovers the doubles exactly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void validate() const;
};

/// LF line endings, comma separator, no quoting. Bit-exact for equal input.
std::string emit_csv(const CsvTable& table);

/// Inverse of emit_csv (used by round-trip checks and the CLI tests).
CsvTable parse_csv(std::string_view text);

std::string format_double(double v);  // %.17g

}  // namespace biocircuit::io
