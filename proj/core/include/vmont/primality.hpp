#pragma once

#include <bit>
#include <cstdint>

namespace vmont {

/// Number of significant bits; bit_length(0) == 0.
constexpr unsigned bit_length(std::uint64_t x) noexcept {
  return static_cast<unsigned>(std::bit_width(x));
}

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n) noexcept;

}  // namespace vmont
