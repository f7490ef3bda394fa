#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace pottsmc {

/// Philox4x32-10 block function (Salmon, Moraes, Dror, Shaw, "Parallel random
/// numbers: as easy as 1, 2, 3", SC'11), as in the Random123 reference code.
///
/// Ten rounds of
///   (hi0, lo0) = M0 * x0,  (hi1, lo1) = M1 * x2   (32x32 -> 64 bit)
///   x = (hi1 ^ x1 ^ k0, lo1, hi0 ^ x3 ^ k1, lo0)
/// with the key bumped by the Weyl constants (W0, W1) between rounds.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static constexpr Counter round(Counter x, Key k) {
    const std::uint64_t p0 = std::uint64_t{kM0} * x[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * x[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
  }

  static constexpr Counter block(Counter ctr, Key key) {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      ctr = round(ctr, key);
    }
    return ctr;
  }
};

/// Counter-based random stream.
///
/// The 64-bit seed is the Philox key; the 128-bit counter holds a 64-bit
/// block number (words 0-1) and a 64-bit stream id (words 2-3). Streams with
/// distinct ids under one seed never share a counter value, so split() gives
/// non-overlapping parallel streams. Output depends only on (seed, stream,
/// draw count), never on the platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  RngStream split(std::uint64_t stream) const { return RngStream(seed_, stream); }

  std::uint64_t next_u64() {
    if (lane_ == 2) refill();
    return buffer_[lane_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform on [0, n) without modulo bias (Lemire's multiply-shift with
  /// rejection).
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("RngStream::uniform_int: empty range");
    __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<__uint128_t>(next_u64()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  void refill() {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_),
                                  static_cast<std::uint32_t>(block_ >> 32),
                                  static_cast<std::uint32_t>(stream_),
                                  static_cast<std::uint32_t>(stream_ >> 32)};
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                              static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = Philox4x32::block(ctr, key);
    buffer_[0] = std::uint64_t{out[0]} | (std::uint64_t{out[1]} << 32);
    buffer_[1] = std::uint64_t{out[2]} | (std::uint64_t{out[3]} << 32);
    ++block_;
    lane_ = 0;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int lane_ = 2;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

}  // namespace pottsmc
