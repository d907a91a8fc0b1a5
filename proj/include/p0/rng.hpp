#pragma once

#include <cstdint>

namespace p0 {

/// One stream of a counter-based splittable family (Philox2x64-10,
/// Salmon et al. 2011). The key is the master seed and the counter encodes
/// (stream, block), so every (seed, stream) pair yields an independent,
/// platform-identical sequence regardless of execution order. Monte Carlo
/// replicate k draws from stream k.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : key_(seed), stream_(stream) {}

  std::uint64_t next_u64() {
    if (have_buffered_) {
      have_buffered_ = false;
      return buffered_;
    }
    std::uint64_t x0 = stream_;
    std::uint64_t x1 = block_++;
    std::uint64_t key = key_;
    for (int round = 0; round < 10; ++round) {
      const unsigned __int128 prod = static_cast<unsigned __int128>(kMultiplier) * x0;
      const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
      const std::uint64_t lo = static_cast<std::uint64_t>(prod);
      x0 = hi ^ key ^ x1;
      x1 = lo;
      key += kWeyl;
    }
    buffered_ = x1;
    have_buffered_ = true;
    return x0;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static constexpr std::uint64_t kMultiplier = 0xD2B74407B1CE6E93ULL;
  static constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::uint64_t buffered_ = 0;
  bool have_buffered_ = false;
};

}  // namespace p0
