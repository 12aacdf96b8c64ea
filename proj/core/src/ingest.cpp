#include "wsn/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <string_view>

#include "wsn/errors.hpp"
#include "wsn/random.hpp"
#include "wsn/stdp.hpp"

namespace wsn {
namespace {

struct Reading {
  double timestamp;
  double value;
  std::size_t order;  // file order, breaks timestamp ties
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line, const char* name) {
  field = trim(field);
  T value{};
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, value);
  if (field.empty() || res.ec != std::errc() || res.ptr != end)
    throw CsvFormatError(line, std::string("cannot parse ") + name + " '" + std::string(field) + "'");
  return value;
}

}  // namespace

ObservationStream read_stream_csv(std::istream& in, const NodeLayout& layout, std::size_t n,
                                  double noise_var, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("block length must be >= 1");
  std::map<int, std::vector<Reading>> by_node;
  std::string raw;
  std::size_t line = 0;
  std::size_t order = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (line == 1 && text == "timestamp,node_id,value") continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      fields.push_back(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 3)
      throw CsvFormatError(line, "expected 3 fields, got " + std::to_string(fields.size()));
    const double ts = parse_field<double>(fields[0], line, "timestamp");
    const int id = parse_field<int>(fields[1], line, "node_id");
    const double value = parse_field<double>(fields[2], line, "value");
    if (!std::isfinite(ts) || !std::isfinite(value)) throw CsvFormatError(line, "non-finite value");
    if (!layout.contains(id)) throw CsvFormatError(line, "node " + std::to_string(id) + " is not in the layout");
    by_node[id].push_back({ts, value, order++});
  }

  std::size_t num_blocks = std::numeric_limits<std::size_t>::max();
  for (int id : layout.node_ids) {
    const auto it = by_node.find(id);
    const std::size_t count = it == by_node.end() ? 0 : it->second.size();
    num_blocks = std::min(num_blocks, count / n);
  }
  if (num_blocks == 0) throw InvalidArgument("ingested CSV holds less than one block for some node");

  const RealVector w_gen = stdp::initial_weight(n);
  const double noise_sd = std::sqrt(noise_var);
  ObservationStream out;
  for (int id : layout.node_ids) {
    auto& readings = by_node[id];
    std::sort(readings.begin(), readings.end(), [](const Reading& a, const Reading& b) {
      return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.order < b.order;
    });
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(id), StreamRole::kIngestNoise);
    std::normal_distribution<double> normal(0.0, 1.0);
    NodeStream node;
    for (std::size_t b = 0; b < num_blocks; ++b) {
      ObservationBlock block{id, b, {}, 0.0};
      for (std::size_t k = 0; k < n; ++k) block.samples.push_back(readings[b * n + k].value);
      block.desired = dot(block.samples, w_gen) + noise_sd * normal(rng);
      node.push_back(std::move(block));
    }
    out.push_back(std::move(node));
  }
  return out;
}

ObservationStream load_stream_csv(const std::filesystem::path& path, const NodeLayout& layout,
                                  std::size_t n, double noise_var, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_stream_csv(in, layout, n, noise_var, seed);
}

}  // namespace wsn
