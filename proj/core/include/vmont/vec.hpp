#pragma once

#include <array>
#include <cstdint>
#include <ostream>

namespace vmont {

/// One 128-bit register viewed as four 32-bit lanes. Lane 0 is the lowest
/// memory address (and the least significant word of the register).
struct VecU32x4 {
  std::array<std::uint32_t, 4> lanes{};

  constexpr std::uint32_t& operator[](std::size_t i) { return lanes[i]; }
  constexpr std::uint32_t operator[](std::size_t i) const { return lanes[i]; }
  friend bool operator==(const VecU32x4&, const VecU32x4&) = default;
};

/// The same 128 bits viewed as two 64-bit lanes.
struct VecU64x2 {
  std::array<std::uint64_t, 2> lanes{};

  constexpr std::uint64_t& operator[](std::size_t i) { return lanes[i]; }
  constexpr std::uint64_t operator[](std::size_t i) const { return lanes[i]; }
  friend bool operator==(const VecU64x2&, const VecU64x2&) = default;
};

constexpr VecU64x2 as_u64x2(const VecU32x4& v) noexcept {
  return {{v[0] | (std::uint64_t{v[1]} << 32), v[2] | (std::uint64_t{v[3]} << 32)}};
}

constexpr VecU32x4 as_u32x4(const VecU64x2& v) noexcept {
  return {{static_cast<std::uint32_t>(v[0]), static_cast<std::uint32_t>(v[0] >> 32),
           static_cast<std::uint32_t>(v[1]), static_cast<std::uint32_t>(v[1] >> 32)}};
}

constexpr VecU32x4 splat(std::uint32_t x) noexcept { return {{x, x, x, x}}; }

inline std::ostream& operator<<(std::ostream& os, const VecU32x4& v) {
  return os << '[' << v[0] << ',' << v[1] << ',' << v[2] << ',' << v[3] << ']';
}

inline std::ostream& operator<<(std::ostream& os, const VecU64x2& v) {
  return os << '(' << v[0] << ',' << v[1] << ')';
}

}  // namespace vmont
