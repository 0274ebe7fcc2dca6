#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace biocircuit::io {

/// Parse or validation failure. `line` is 1-based, 0 when no single line is
/// at fault (e.g. a missing section).
struct ConfigError : std::runtime_error {
  int line;
  ConfigError(int line_no, const std::string& message)
      : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + message
                                       : message),
        line(line_no) {}
};

struct KvEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

/// Sectioned key = value text. '#' starts a comment; blank lines are
/// ignored; keys are unique per section. Parsing never crashes on arbitrary
/// bytes: it either returns a file or throws ConfigError.
class KvFile {
 public:
  static KvFile parse(std::string_view text);

  const std::vector<KvEntry>& entries() const { return entries_; }
  const KvEntry* find(std::string_view section, std::string_view key) const;
  bool has_section(std::string_view section) const;
  std::vector<const KvEntry*> section_entries(std::string_view section) const;
  /// Declared sections with the line of their header, in order.
  const std::vector<std::pair<std::string, int>>& sections() const { return sections_; }

 private:
  std::vector<KvEntry> entries_;
  std::vector<std::pair<std::string, int>> sections_;
};

/// Strict numeric conversions; throw ConfigError naming the offending line.
double parse_number(const KvEntry& entry);
double parse_positive(const KvEntry& entry);
double parse_nonnegative(const KvEntry& entry);
long parse_integer(const KvEntry& entry);
/// Whitespace-separated list of numbers.
std::vector<double> parse_number_list(const KvEntry& entry);
/// "(t, v) (t, v) ..." pair list, or a single number meaning a constant.
std::vector<std::pair<double, double>> parse_pair_list(const KvEntry& entry);

}  // namespace biocircuit::io
