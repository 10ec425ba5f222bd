#include "ruin2d/rng.hpp"

#include <cmath>
#include <limits>

namespace ruin2d {

namespace {

std::seed_seq make_seed(std::uint64_t master_seed, std::uint64_t stream) {
  const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  return std::seed_seq{lo(master_seed), hi(master_seed), lo(stream), hi(stream), 0x72756e32u};
}

}  // namespace

StreamRng::StreamRng(std::uint64_t master_seed, std::uint64_t stream) {
  auto seq = make_seed(master_seed, stream);
  engine_.seed(seq);
}

double StreamRng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

std::uint64_t StreamRng::below(std::uint64_t n) {
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

}  // namespace ruin2d
