#include "wsn/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include <unistd.h>

#include "wsn/errors.hpp"

namespace wsn {

const Table* RunReport::find(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

std::string_view to_string(ReportKind kind) {
  switch (kind) {
    case ReportKind::kAda: return "ADA";
    case ReportKind::kStdp: return "STDP";
    case ReportKind::kDetect: return "DETECT";
    case ReportKind::kSweep: return "SWEEP";
  }
  return "UNKNOWN";
}

std::string format_real(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("non-finite value in report");
  if (value == 0.0) value = 0.0;  // fold -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      std::visit(
          [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::int64_t>) out += std::to_string(v);
            else if constexpr (std::is_same_v<T, double>) out += format_real(v);
            else if constexpr (std::is_same_v<T, std::string>) out += v;
          },
          row[c]);
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

void write_report(const RunReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  // Render everything first so a bad value leaves no files behind.
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  for (const auto& t : report.tables) files.emplace_back(dir / (t.name + ".csv"), to_csv(t));
  for (const auto& [path, text] : files) write_file_atomic(path, text);
}

}  // namespace wsn
