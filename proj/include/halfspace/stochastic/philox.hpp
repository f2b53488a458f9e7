#pragma once

#include <array>
#include <cstdint>

namespace halfspace::stochastic {

/// Philox4x32-10 counter-based generator (Salmon et al.): a keyed bijection
/// of 128-bit counters, so any block of any stream is computed directly.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

/// Standard normals for one (seed, stream) pair. Block k of the stream uses
/// counter (k_lo, k_hi, stream_lo, stream_hi) under key (seed_lo, seed_hi);
/// each block yields two uniforms with 53 random bits and, by Box-Muller,
/// two normals consumed in order.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream);

  double next();
  /// Uniform in (0, 1] from the next half block; exposed for tests.
  static double to_unit(std::uint32_t hi, std::uint32_t lo);
  std::uint64_t blocks_used() const { return block_; }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace halfspace::stochastic
