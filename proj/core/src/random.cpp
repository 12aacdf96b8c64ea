#include "wsn/random.hpp"

namespace wsn {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) noexcept {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ splitmix64(a + 0x1000));
  h = splitmix64(h ^ splitmix64(b + 0x2000));
  h = splitmix64(h ^ splitmix64(c + 0x3000));
  return h;
}

Rng make_rng(std::uint64_t seed, std::uint64_t node_id, StreamRole role) {
  const std::uint64_t child = derive_seed(seed, node_id, static_cast<std::uint64_t>(role));
  std::seed_seq seq{static_cast<std::uint32_t>(child), static_cast<std::uint32_t>(child >> 32)};
  return Rng(seq);
}

}  // namespace wsn
