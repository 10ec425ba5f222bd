#pragma once

#include <cstdint>
#include <random>

namespace ruin2d {

/// Random stream number `stream` of a master seed. The engine state is a pure
/// function of (master_seed, stream), so chunks of paths can be generated in
/// any order, by any number of workers, with identical results.
class StreamRng {
 public:
  StreamRng(std::uint64_t master_seed, std::uint64_t stream);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Exp(rate) by inversion.
  double exponential(double rate);

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace ruin2d
