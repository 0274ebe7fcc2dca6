#include "biocircuit/io/kv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace biocircuit::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

// strtod over an exact token; rejects partial parses, NaN and infinities
std::optional<double> to_double(std::string_view token) {
  if (token.empty() || token.size() > 64) return std::nullopt;
  char buf[96];
  std::copy(token.begin(), token.end(), buf);
  buf[token.size()] = '\0';
  char* end = nullptr;
  const double v = std::strtod(buf, &end);
  if (end != buf + token.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

KvFile KvFile::parse(std::string_view text) {
  KvFile file;
  std::string current_section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = eol == std::string_view::npos
                               ? text.substr(pos)
                               : text.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const std::size_t hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(line_no, "malformed section header (missing ']')");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name))
        throw ConfigError(line_no, "invalid section name '" + std::string(name) + "'");
      current_section = std::string(name);
      file.sections_.emplace_back(std::string(name), line_no);
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!valid_name(key))
      throw ConfigError(line_no, "invalid key '" + std::string(key) + "'");
    if (current_section.empty())
      throw ConfigError(line_no, "key '" + std::string(key) + "' appears before any [section]");
    if (const KvEntry* prior = file.find(current_section, key))
      throw ConfigError(line_no, "duplicate key '" + std::string(key) +
                                     "' (first defined on line " +
                                     std::to_string(prior->line) + ")");
    file.entries_.push_back(
        {current_section, std::string(key), std::string(value), line_no});
  }
  return file;
}

const KvEntry* KvFile::find(std::string_view section, std::string_view key) const {
  for (const KvEntry& e : entries_)
    if (e.section == section && e.key == key) return &e;
  return nullptr;
}

bool KvFile::has_section(std::string_view section) const {
  return std::any_of(sections_.begin(), sections_.end(),
                     [&](const auto& s) { return s.first == section; });
}

std::vector<const KvEntry*> KvFile::section_entries(std::string_view section) const {
  std::vector<const KvEntry*> out;
  for (const KvEntry& e : entries_)
    if (e.section == section) out.push_back(&e);
  return out;
}

double parse_number(const KvEntry& entry) {
  const auto v = to_double(entry.value);
  if (!v)
    throw ConfigError(entry.line, "value of '" + entry.key + "' is not a finite number");
  return *v;
}

double parse_positive(const KvEntry& entry) {
  const double v = parse_number(entry);
  if (!(v > 0.0))
    throw ConfigError(entry.line, "'" + entry.key + "' must be strictly positive");
  return v;
}

double parse_nonnegative(const KvEntry& entry) {
  const double v = parse_number(entry);
  if (v < 0.0) throw ConfigError(entry.line, "'" + entry.key + "' must be nonnegative");
  return v;
}

long parse_integer(const KvEntry& entry) {
  const double v = parse_number(entry);
  const double r = std::round(v);
  if (std::abs(v - r) > 0.0 || std::abs(r) > 9e15)
    throw ConfigError(entry.line, "'" + entry.key + "' must be an integer");
  return static_cast<long>(r);
}

std::vector<double> parse_number_list(const KvEntry& entry) {
  std::vector<double> out;
  std::string_view rest = entry.value;
  while (true) {
    rest = trim(rest);
    if (rest.empty()) break;
    std::size_t end = 0;
    while (end < rest.size() && !std::isspace(static_cast<unsigned char>(rest[end]))) ++end;
    const auto v = to_double(rest.substr(0, end));
    if (!v)
      throw ConfigError(entry.line, "value of '" + entry.key + "' is not a number list");
    out.push_back(*v);
    rest.remove_prefix(end);
  }
  if (out.empty())
    throw ConfigError(entry.line, "value of '" + entry.key + "' is empty");
  return out;
}

std::vector<std::pair<double, double>> parse_pair_list(const KvEntry& entry) {
  const std::string_view text = trim(entry.value);
  if (text.empty())
    throw ConfigError(entry.line, "value of '" + entry.key + "' is empty");
  if (text.front() != '(') {
    const auto v = to_double(text);
    if (!v)
      throw ConfigError(entry.line,
                        "value of '" + entry.key + "' must be a number or (time, value) pairs");
    return {{0.0, *v}};
  }
  std::vector<std::pair<double, double>> out;
  std::string_view rest = text;
  while (true) {
    rest = trim(rest);
    if (rest.empty()) break;
    if (rest.front() != '(')
      throw ConfigError(entry.line, "expected '(' in schedule for '" + entry.key + "'");
    const std::size_t close = rest.find(')');
    if (close == std::string_view::npos)
      throw ConfigError(entry.line, "unclosed '(' in schedule for '" + entry.key + "'");
    const std::string_view body = rest.substr(1, close - 1);
    const std::size_t comma = body.find(',');
    if (comma == std::string_view::npos)
      throw ConfigError(entry.line, "schedule pair needs 'time, value' for '" + entry.key + "'");
    const auto t = to_double(trim(body.substr(0, comma)));
    const auto v = to_double(trim(body.substr(comma + 1)));
    if (!t || !v)
      throw ConfigError(entry.line, "non-numeric schedule pair for '" + entry.key + "'");
    out.emplace_back(*t, *v);
    rest.remove_prefix(close + 1);
  }
  return out;
}

}  // namespace biocircuit::io
