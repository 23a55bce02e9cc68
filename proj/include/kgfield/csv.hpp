#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace kgfield {

inline constexpr const char* kToolVersion = "kgfield 1.0.0";

/// 64-bit FNV-1a digest, rendered as 16 hex digits.
std::string config_hash(const std::string& text);

struct CsvMeta {
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> params;
  /// Written as a header comment only, so bodies stay byte-identical.
  std::string timestamp;
};

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);
  void add_footer(const std::string& line) { footer_.push_back(line); }

  void write(std::ostream& out, const CsvMeta& meta) const;
  void save(const std::string& path, const CsvMeta& meta) const;

private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::string> footer_;
};

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

/// Current UTC time as ISO 8601.
std::string utc_timestamp();

} // namespace kgfield
