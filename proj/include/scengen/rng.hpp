#pragma once

#include <cstdint>

namespace scengen {

// Deterministic counter-free random stream (splitmix64). Every sampling
// routine takes one of these by reference; substreams are derived as
// seed XOR stream-id so scenario generation can fan out reproducibly
// regardless of evaluation order or threading.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {
    // Decorrelate trivially related seeds (0, 1, seed^1, ...).
    next_u64();
    next_u64();
  }

  static RngStream substream(std::uint64_t seed, std::uint64_t stream_id) {
    return RngStream(seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1)));
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform draw strictly inside (0,1); safe to feed to inverse CDFs.
  double next_u01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace scengen
