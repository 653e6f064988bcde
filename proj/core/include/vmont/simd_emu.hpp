#pragma once

// Lane-by-lane models of the SSE/AVX2 integer instructions used by the
// vectorized Montgomery kernel. Each function reproduces the bit-level
// behaviour of the intrinsic it is named after; the float-typed shuffle
// works on the raw bits, since the casts around it are free reinterpretations.

#include <array>
#include <cstdint>

#include "vmont/vec.hpp"

namespace vmont::emu {

using Reg = VecU32x4;

/// _mm_mul_epu32: lanes 0 and 2 multiplied into two 64-bit products.
constexpr Reg mul_epu32(const Reg& a, const Reg& b) noexcept {
  return as_u32x4(VecU64x2{{std::uint64_t{a[0]} * b[0], std::uint64_t{a[2]} * b[2]}});
}

/// _mm_mullo_epi32: low 32 bits of each lane product.
constexpr Reg mullo_epi32(const Reg& a, const Reg& b) noexcept {
  return {{a[0] * b[0], a[1] * b[1], a[2] * b[2], a[3] * b[3]}};
}

/// _mm_shuffle_epi32: dst[i] = a[(imm >> 2i) & 3].
constexpr Reg shuffle_epi32(const Reg& a, unsigned imm) noexcept {
  return {{a[imm & 3], a[(imm >> 2) & 3], a[(imm >> 4) & 3], a[(imm >> 6) & 3]}};
}

/// _mm_shuffle_ps: dst[0..1] select from a, dst[2..3] select from b.
constexpr Reg shuffle_ps(const Reg& a, const Reg& b, unsigned imm) noexcept {
  return {{a[imm & 3], a[(imm >> 2) & 3], b[(imm >> 4) & 3], b[(imm >> 6) & 3]}};
}

constexpr Reg unpacklo_epi32(const Reg& a, const Reg& b) noexcept { return {{a[0], b[0], a[1], b[1]}}; }

constexpr Reg unpackhi_epi32(const Reg& a, const Reg& b) noexcept { return {{a[2], b[2], a[3], b[3]}}; }

/// _mm_blend_epi32: dst[i] = bit i of imm ? b[i] : a[i].
constexpr Reg blend_epi32(const Reg& a, const Reg& b, unsigned imm) noexcept {
  Reg out;
  for (unsigned i = 0; i < 4; ++i) out[i] = ((imm >> i) & 1) ? b[i] : a[i];
  return out;
}

constexpr Reg and_si128(const Reg& a, const Reg& b) noexcept {
  return {{a[0] & b[0], a[1] & b[1], a[2] & b[2], a[3] & b[3]}};
}

constexpr Reg add_epi32(const Reg& a, const Reg& b) noexcept {
  return {{a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}};
}

constexpr Reg sub_epi32(const Reg& a, const Reg& b) noexcept {
  return {{a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}};
}

constexpr Reg add_epi64(const Reg& a, const Reg& b) noexcept {
  const VecU64x2 x = as_u64x2(a), y = as_u64x2(b);
  return as_u32x4(VecU64x2{{x[0] + y[0], x[1] + y[1]}});
}

/// Signed 32-bit greater-than; all-ones lanes where a > b.
constexpr Reg cmpgt_epi32(const Reg& a, const Reg& b) noexcept {
  Reg out;
  for (unsigned i = 0; i < 4; ++i) {
    out[i] = static_cast<std::int32_t>(a[i]) > static_cast<std::int32_t>(b[i]) ? ~std::uint32_t{0} : 0;
  }
  return out;
}

/// Shift counts above 63 clear the lane, as on hardware.
constexpr Reg slli_epi64(const Reg& a, unsigned count) noexcept {
  const VecU64x2 x = as_u64x2(a);
  if (count > 63) return Reg{};
  return as_u32x4(VecU64x2{{x[0] << count, x[1] << count}});
}

constexpr Reg srli_epi64(const Reg& a, unsigned count) noexcept {
  const VecU64x2 x = as_u64x2(a);
  if (count > 63) return Reg{};
  return as_u32x4(VecU64x2{{x[0] >> count, x[1] >> count}});
}

/// Whole-register right shift by a byte count.
constexpr Reg srli_si128(const Reg& a, unsigned bytes) noexcept {
  if (bytes > 15) return Reg{};
  std::array<std::uint8_t, 16> in{};
  for (unsigned i = 0; i < 16; ++i) in[i] = static_cast<std::uint8_t>(a[i / 4] >> (8 * (i % 4)));
  Reg out;
  for (unsigned i = 0; i + bytes < 16; ++i) out[i / 4] |= std::uint32_t{in[i + bytes]} << (8 * (i % 4));
  return out;
}

}  // namespace vmont::emu
