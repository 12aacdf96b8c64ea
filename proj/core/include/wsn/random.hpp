#pragma once

#include <cstdint>
#include <random>

namespace wsn {

/// Independent draw sequences derived from one scenario seed. Each (node, role)
/// pair gets its own engine so perturbing one node never shifts another's draws.
enum class StreamRole : std::uint64_t {
  kInnovation = 1,
  kMeasurementNoise = 2,
  kMalicious = 3,
  kClientNoise = 4,
  kChannel = 5,
  kIngestNoise = 6,
  kSweepPoint = 7,
};

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Mixes a base seed with up to three labels into a well-separated child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0) noexcept;

Rng make_rng(std::uint64_t seed, std::uint64_t node_id, StreamRole role);

}  // namespace wsn
