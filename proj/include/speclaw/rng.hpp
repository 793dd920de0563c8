#pragma once

// Counter-based random numbers for reproducible Monte-Carlo sweeps.
//
// Every replicate owns a stream addressed by (master_seed, cell_index,
// replicate_index). The stream is a Philox4x32-10 block cipher evaluated on a
// 128-bit counter, so the value of draw k in a stream is a pure function of
// those indices and k. No state is shared between streams, which makes the
// samplers independent of thread count and scheduling order.

#include <array>
#include <cmath>
#include <cstdint>

namespace speclaw {

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                       std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

}  // namespace detail

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += detail::kPhiloxW0;
      key[1] += detail::kPhiloxW1;
    }
    std::uint32_t lo0 = 0, hi0 = 0, lo1 = 0, hi1 = 0;
    detail::mulhilo(detail::kPhiloxM0, ctr[0], lo0, hi0);
    detail::mulhilo(detail::kPhiloxM1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seed of a sweep cell, derived statelessly from the master seed.
constexpr std::uint64_t cell_seed(std::uint64_t master_seed,
                                  std::uint64_t cell_index) {
  return mix64(mix64(master_seed) ^ mix64(cell_index + 0x632BE59BD9B4E019ull));
}

/// Position-addressed random stream. Draw k of the stream keyed by
/// (cell_seed, replicate) is block k/2 of Philox, low or high half.
class RngStream {
 public:
  using result_type = std::uint64_t;

  constexpr RngStream(std::uint64_t cell_seed_value,
                      std::uint64_t replicate_index) noexcept
      : key_{static_cast<std::uint32_t>(cell_seed_value),
             static_cast<std::uint32_t>(cell_seed_value >> 32)},
        replicate_(replicate_index) {}

  /// Stream for replicate `replicate_index` of cell `cell_index`.
  static constexpr RngStream for_replicate(std::uint64_t master_seed,
                                           std::uint64_t cell_index,
                                           std::uint64_t replicate_index) {
    return RngStream(cell_seed(master_seed, cell_index), replicate_index);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  constexpr result_type operator()() {
    if (!have_spare_) {
      const PhiloxCounter ctr{static_cast<std::uint32_t>(block_),
                              static_cast<std::uint32_t>(block_ >> 32),
                              static_cast<std::uint32_t>(replicate_),
                              static_cast<std::uint32_t>(replicate_ >> 32)};
      const PhiloxCounter out = philox4x32_10(ctr, key_);
      ++block_;
      spare_ = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
      have_spare_ = true;
      return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    }
    have_spare_ = false;
    return spare_;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Number of 64-bit draws consumed so far.
  constexpr std::uint64_t position() const {
    return 2 * block_ - (have_spare_ ? 1 : 0);
  }

  const PhiloxKey& key() const { return key_; }
  std::uint64_t replicate() const { return replicate_; }

 private:
  PhiloxKey key_;
  std::uint64_t replicate_;
  std::uint64_t block_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace speclaw
