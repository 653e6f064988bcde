#pragma once

// Four-lane Montgomery multiplication over 128-bit registers.
//
// Two backends run the same instruction sequence: a portable emulation
// (always available, the reference) and SSE4.1/AVX2 intrinsics on x86
// hosts that support them.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vmont/modarith.hpp"
#include "vmont/vec.hpp"

namespace vmont {

/// How the high and low halves of four 64-bit products are brought back
/// into two in-order 4-lane vectors.
enum class GatherStrategy {
  FloatShuffleCast,  // 2 x shuffle_ps across vectors, 2 x shuffle_epi32 to reorder
  ShuffleUnpack,     // 2 x shuffle_epi32, then unpacklo/unpackhi_epi32
  BlendAvx2,         // shuffle_epi32, 2 x blend_epi32, shuffle_epi32 (AVX2 only)
};

inline constexpr std::array<GatherStrategy, 3> kAllStrategies = {
    GatherStrategy::FloatShuffleCast, GatherStrategy::ShuffleUnpack, GatherStrategy::BlendAvx2};

/// "FloatShuffleCast", "ShuffleUnpack", "BlendAvx2".
std::string_view to_string(GatherStrategy s) noexcept;
/// "float-shuffle-cast", "shuffle-unpack", "blend".
std::string_view slug(GatherStrategy s) noexcept;
/// Accepts either spelling above, plus "float-shuffle" and "blend-avx2".
std::optional<GatherStrategy> parse_strategy(std::string_view text) noexcept;

// Shuffle and blend control bytes shared by both backends and the generator.
namespace imm {
inline constexpr unsigned kPickEven = 0x88;    // _MM_SHUFFLE(2,0,2,0)
inline constexpr unsigned kPickOdd = 0xDD;     // _MM_SHUFFLE(3,1,3,1)
inline constexpr unsigned kInterleave = 0xD8;  // _MM_SHUFFLE(3,1,2,0)
inline constexpr unsigned kSwapPairs = 0xB1;   // _MM_SHUFFLE(2,3,0,1)
inline constexpr unsigned kBlendOdd = 0x0A;
inline constexpr unsigned kBlendEven = 0x05;
}  // namespace imm

enum class Backend { Emulated, Hardware };

/// Where the vector kernels execute. BlendAvx2 requires has_blend.
struct Target {
  Backend backend = Backend::Emulated;
  bool has_blend = true;

  static Target emulated(bool has_blend = true) noexcept { return {Backend::Emulated, has_blend}; }
  /// Hardware when the CPU runs SSE4.1 (blend iff AVX2), otherwise emulation.
  static Target host() noexcept;
};

/// True when this build carries the intrinsic backend and the CPU runs it.
bool hardware_backend_available() noexcept;

struct Products {
  VecU64x2 even;  // (A0*B0, A2*B2)
  VecU64x2 odd;   // (A1*B1, A3*B3)

  friend bool operator==(const Products&, const Products&) = default;
};

struct HiLo {
  VecU32x4 hi;
  VecU32x4 lo;

  friend bool operator==(const HiLo&, const HiLo&) = default;
};

Products widen_mul_even_odd(const VecU32x4& a, const VecU32x4& b, const Target& target = Target::emulated());

/// hi[i] / lo[i] are the upper / lower words of product i, i = 0..3.
/// Throws UnsupportedStrategy for BlendAvx2 on a target without blend.
HiLo gather_hi_lo(const VecU64x2& even, const VecU64x2& odd, GatherStrategy strategy,
                  const Target& target = Target::emulated());

/// Broadcast constants for one modulus, built once and reused across calls.
struct MontConstants4 {
  VecU32x4 p;
  VecU32x4 p_prime;
  VecU32x4 r_mask;
  VecU32x4 bias;               // 2^31 in every lane
  VecU32x4 p_minus_1_biased;   // (P - 1) - 2^31
  unsigned hi_shift = 0;       // 32 - l
  unsigned lo_shift = 0;       // l

  static MontConstants4 from(const ModParams& params) noexcept;
};

/// Lane i = mont_mul(a[i], b[i]). Inputs must be < P on every lane.
VecU32x4 mont_mul4(const VecU32x4& a, const VecU32x4& b, const MontConstants4& k, GatherStrategy strategy,
                   const Target& target = Target::emulated());

inline VecU32x4 mont_mul4(const VecU32x4& a, const VecU32x4& b, const ModParams& params, GatherStrategy strategy,
                          const Target& target = Target::emulated()) {
  return mont_mul4(a, b, MontConstants4::from(params), strategy, target);
}

/// Every intermediate of the emulated kernel, for checking its invariants.
struct MontMul4Trace {
  Products t;            // step 1: T = a * b
  VecU32x4 t_lo;         // step 2: low words of T, in order
  VecU32x4 m;            // step 3: (t_lo * P') & (R - 1)
  Products t_plus_mp;    // steps 4-5
  HiLo sum;              // step 6
  VecU32x4 pre_sub;      // step 7: (T + mP) / R, < 2P
  VecU32x4 value;        // step 8
};

MontMul4Trace mont_mul4_traced(const VecU32x4& a, const VecU32x4& b, const ModParams& params,
                               GatherStrategy strategy);

/// Branch-free lane-wise `v >= P ? v - P : v` for lanes in [0, 2P).
VecU32x4 reduce_2p_to_p(const VecU32x4& v, std::uint32_t p, const Target& target = Target::emulated());

/// Element-wise Montgomery product. Whole groups of four go through
/// mont_mul4; the remaining length % 4 elements use scalar mont_mul.
/// Throws vmont::Error on length mismatch.
void mont_mul_batch(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                    std::span<std::uint32_t> out, const ModParams& params, GatherStrategy strategy,
                    const Target& target = Target::emulated());

std::vector<std::uint32_t> mont_mul_batch(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                                          const ModParams& params, GatherStrategy strategy,
                                          const Target& target = Target::emulated());

}  // namespace vmont
