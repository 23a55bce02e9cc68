#include "kgfield/csv.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "kgfield/core.hpp"

namespace kgfield {

std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw PreconditionError("CsvTable needs at least one column");
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) throw PreconditionError("CsvTable: row width mismatch");
  rows_.push_back(std::move(cells));
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  for (double v : values) cells.push_back(format_number(v));
  add_row(std::move(cells));
}

void CsvTable::write(std::ostream& out, const CsvMeta& meta) const {
  out << "# tool: " << kToolVersion << '\n';
  out << "# config_hash: " << meta.config_hash << '\n';
  if (!meta.timestamp.empty()) out << "# generated: " << meta.timestamp << '\n';
  for (const auto& [k, v] : meta.params) out << "# param " << k << " = " << v << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  }
  for (const auto& f : footer_) out << "# " << f << '\n';
}

void CsvTable::save(const std::string& path, const CsvMeta& meta) const {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot open '" + path + "' for writing");
  write(out, meta);
}

} // namespace kgfield
