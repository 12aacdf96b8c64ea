#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string_view>
#include <string>
#include <variant>
#include <vector>

namespace wsn {

/// Empty, integer, real or text cell. Reals are written with 9 significant digits.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::string name;  // file stem, e.g. "ada_iterations"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class ReportKind { kAda, kStdp, kDetect, kSweep };

struct RunReport {
  ReportKind kind = ReportKind::kAda;
  std::vector<Table> tables;
  std::map<std::string, std::string> metadata;
  std::vector<RunReport> sub_reports;

  /// nullptr when absent.
  const Table* find(const std::string& name) const;
};

std::string format_real(double value);
std::string to_csv(const Table& table);

/// Writes `contents` to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Writes every table of the report as `<dir>/<name>.csv`. Throws IoError.
void write_report(const RunReport& report, const std::filesystem::path& dir);

std::string_view to_string(ReportKind kind);

}  // namespace wsn
