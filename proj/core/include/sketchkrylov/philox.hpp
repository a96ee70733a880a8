#pragma once

#include <array>
#include <cstdint>

namespace sketchkrylov {

// Philox4x32-10 counter-based generator.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept;

inline PhiloxKey philox_key(std::uint64_t seed) noexcept {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// Sequential draws from counters (i_lo, i_hi, stream, 0), i = 0, 1, ...
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint32_t stream) noexcept
      : key_(philox_key(seed)), stream_(stream) {}

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  // Uniform in [0, range) by rejection; range > 0.
  std::uint64_t bounded(std::uint64_t range) noexcept;
  // Uniform in (0, 1) with 53 random bits.
  double uniform() noexcept;
  // Standard normal (Box-Muller).
  double normal() noexcept;

 private:
  PhiloxKey key_;
  std::uint32_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sketchkrylov
