#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>

#include "wsn/fieldgen.hpp"

namespace wsn {

/// Reads `timestamp,node_id,value` rows (optional header line) and groups each
/// node's readings, in timestamp order, into blocks of `n`. Every node of the
/// layout must appear; all nodes are truncated to the shortest whole-block
/// count. Desired values are formed like synthetic ones, d = u·w₀ + v.
/// Malformed rows throw CsvFormatError carrying the line number.
ObservationStream read_stream_csv(std::istream& in, const NodeLayout& layout, std::size_t n,
                                  double noise_var, std::uint64_t seed);

ObservationStream load_stream_csv(const std::filesystem::path& path, const NodeLayout& layout,
                                  std::size_t n, double noise_var, std::uint64_t seed);

}  // namespace wsn
