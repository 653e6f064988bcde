#include "vmont/vkernels.hpp"

#include <string>

#include "vkernels_hw.hpp"
#include "vmont/errors.hpp"
#include "vmont/simd_emu.hpp"

namespace vmont {
namespace {

void require_strategy(GatherStrategy strategy, const Target& target) {
  if (strategy == GatherStrategy::BlendAvx2 && !target.has_blend) {
    throw UnsupportedStrategy("gather strategy BlendAvx2 needs blend_epi32, which the target lacks");
  }
}

void require_hardware(const Target& target, GatherStrategy strategy) {
  if (target.backend != Backend::Hardware) return;
  if (!hardware_backend_available()) throw UnsupportedStrategy("hardware SIMD backend is not available here");
  if (strategy == GatherStrategy::BlendAvx2 && !hw::avx2_supported()) {
    throw UnsupportedStrategy("gather strategy BlendAvx2 needs AVX2, which this CPU lacks");
  }
}

Products emu_widen(const VecU32x4& a, const VecU32x4& b) {
  const emu::Reg even = emu::mul_epu32(a, b);
  const emu::Reg odd = emu::mul_epu32(emu::srli_si128(a, 4), emu::srli_si128(b, 4));
  return {as_u64x2(even), as_u64x2(odd)};
}

HiLo emu_gather(const VecU64x2& even64, const VecU64x2& odd64, GatherStrategy strategy) {
  const emu::Reg even = as_u32x4(even64);  // [lo0, hi0, lo2, hi2]
  const emu::Reg odd = as_u32x4(odd64);    // [lo1, hi1, lo3, hi3]
  switch (strategy) {
    case GatherStrategy::FloatShuffleCast: {
      const emu::Reg lo = emu::shuffle_ps(even, odd, imm::kPickEven);  // [lo0, lo2, lo1, lo3]
      const emu::Reg hi = emu::shuffle_ps(even, odd, imm::kPickOdd);
      return {emu::shuffle_epi32(hi, imm::kInterleave), emu::shuffle_epi32(lo, imm::kInterleave)};
    }
    case GatherStrategy::ShuffleUnpack: {
      const emu::Reg e = emu::shuffle_epi32(even, imm::kInterleave);  // [lo0, lo2, hi0, hi2]
      const emu::Reg o = emu::shuffle_epi32(odd, imm::kInterleave);
      return {emu::unpackhi_epi32(e, o), emu::unpacklo_epi32(e, o)};
    }
    case GatherStrategy::BlendAvx2: {
      const emu::Reg flipped = emu::shuffle_epi32(even, imm::kSwapPairs);  // [hi0, lo0, hi2, lo2]
      const emu::Reg hi = emu::blend_epi32(flipped, odd, imm::kBlendOdd);
      const emu::Reg lo = emu::blend_epi32(flipped, odd, imm::kBlendEven);  // [lo1, lo0, lo3, lo2]
      return {hi, emu::shuffle_epi32(lo, imm::kSwapPairs)};
    }
  }
  return {};
}

VecU32x4 emu_reduce(const VecU32x4& v, const VecU32x4& p, const VecU32x4& bias, const VecU32x4& pm1_biased) {
  // No unsigned compare: bias both sides by 2^31 and use the signed one.
  const emu::Reg ge = emu::cmpgt_epi32(emu::sub_epi32(v, bias), pm1_biased);
  return emu::sub_epi32(v, emu::and_si128(ge, p));
}

MontMul4Trace emu_mont_mul4(const VecU32x4& a, const VecU32x4& b, const MontConstants4& k, GatherStrategy strategy) {
  MontMul4Trace tr;
  tr.t = emu_widen(a, b);
  tr.t_lo = emu_gather(tr.t.even, tr.t.odd, strategy).lo;
  tr.m = emu::and_si128(emu::mullo_epi32(tr.t_lo, k.p_prime), k.r_mask);
  const emu::Reg mp_even = emu::mul_epu32(tr.m, k.p);
  const emu::Reg mp_odd = emu::mul_epu32(emu::srli_si128(tr.m, 4), k.p);
  tr.t_plus_mp = {as_u64x2(emu::add_epi64(as_u32x4(tr.t.even), mp_even)),
                  as_u64x2(emu::add_epi64(as_u32x4(tr.t.odd), mp_odd))};
  tr.sum = emu_gather(tr.t_plus_mp.even, tr.t_plus_mp.odd, strategy);
  // The 64-bit shifts act lane-wise here: hi << (32 - l) stays below 2^32
  // and the low l bits of every lo word are zero.
  tr.pre_sub = emu::add_epi32(emu::slli_epi64(tr.sum.hi, k.hi_shift), emu::srli_epi64(tr.sum.lo, k.lo_shift));
  tr.value = emu_reduce(tr.pre_sub, k.p, k.bias, k.p_minus_1_biased);
  return tr;
}

}  // namespace

std::string_view to_string(GatherStrategy s) noexcept {
  switch (s) {
    case GatherStrategy::FloatShuffleCast: return "FloatShuffleCast";
    case GatherStrategy::ShuffleUnpack: return "ShuffleUnpack";
    case GatherStrategy::BlendAvx2: return "BlendAvx2";
  }
  return "?";
}

std::string_view slug(GatherStrategy s) noexcept {
  switch (s) {
    case GatherStrategy::FloatShuffleCast: return "float-shuffle-cast";
    case GatherStrategy::ShuffleUnpack: return "shuffle-unpack";
    case GatherStrategy::BlendAvx2: return "blend";
  }
  return "?";
}

std::optional<GatherStrategy> parse_strategy(std::string_view text) noexcept {
  for (GatherStrategy s : kAllStrategies) {
    if (text == to_string(s) || text == slug(s)) return s;
  }
  if (text == "float-shuffle") return GatherStrategy::FloatShuffleCast;
  if (text == "blend-avx2") return GatherStrategy::BlendAvx2;
  return std::nullopt;
}

bool hardware_backend_available() noexcept { return hw::sse41_supported(); }

Target Target::host() noexcept {
  if (hardware_backend_available()) return {Backend::Hardware, hw::avx2_supported()};
  return emulated();
}

Products widen_mul_even_odd(const VecU32x4& a, const VecU32x4& b, const Target& target) {
  require_hardware(target, GatherStrategy::FloatShuffleCast);
  if (target.backend == Backend::Hardware) return hw::widen_mul_even_odd(a, b);
  return emu_widen(a, b);
}

HiLo gather_hi_lo(const VecU64x2& even, const VecU64x2& odd, GatherStrategy strategy, const Target& target) {
  require_strategy(strategy, target);
  require_hardware(target, strategy);
  if (target.backend == Backend::Hardware) return hw::gather_hi_lo(even, odd, strategy);
  return emu_gather(even, odd, strategy);
}

MontConstants4 MontConstants4::from(const ModParams& params) noexcept {
  MontConstants4 k;
  k.p = splat(params.p());
  k.p_prime = splat(params.p_prime());
  k.r_mask = splat(static_cast<std::uint32_t>(params.r_mask()));
  k.bias = splat(0x80000000u);
  k.p_minus_1_biased = splat((params.p() - 1) - 0x80000000u);
  k.hi_shift = 32 - params.l();
  k.lo_shift = params.l();
  return k;
}

VecU32x4 mont_mul4(const VecU32x4& a, const VecU32x4& b, const MontConstants4& k, GatherStrategy strategy,
                   const Target& target) {
  require_strategy(strategy, target);
  require_hardware(target, strategy);
  if (target.backend == Backend::Hardware) return hw::mont_mul4(a, b, k, strategy);
  return emu_mont_mul4(a, b, k, strategy).value;
}

MontMul4Trace mont_mul4_traced(const VecU32x4& a, const VecU32x4& b, const ModParams& params,
                               GatherStrategy strategy) {
  return emu_mont_mul4(a, b, MontConstants4::from(params), strategy);
}

VecU32x4 reduce_2p_to_p(const VecU32x4& v, std::uint32_t p, const Target& target) {
  if (target.backend == Backend::Hardware) {
    require_hardware(target, GatherStrategy::FloatShuffleCast);
    return hw::reduce_2p_to_p(v, p);
  }
  return emu_reduce(v, splat(p), splat(0x80000000u), splat((p - 1) - 0x80000000u));
}

void mont_mul_batch(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                    std::span<std::uint32_t> out, const ModParams& params, GatherStrategy strategy,
                    const Target& target) {
  if (a.size() != b.size() || a.size() != out.size()) {
    throw Error("mont_mul_batch: length mismatch (" + std::to_string(a.size()) + ", " +
                std::to_string(b.size()) + ", " + std::to_string(out.size()) + ")");
  }
  require_strategy(strategy, target);
  require_hardware(target, strategy);
  const MontConstants4 k = MontConstants4::from(params);
  const std::size_t groups = a.size() / 4;
  if (target.backend == Backend::Hardware) {
    hw::mont_mul_groups(a.data(), b.data(), out.data(), groups, k, strategy);
  } else {
    for (std::size_t g = 0; g < groups; ++g) {
      const std::size_t i = 4 * g;
      const VecU32x4 va{{a[i], a[i + 1], a[i + 2], a[i + 3]}};
      const VecU32x4 vb{{b[i], b[i + 1], b[i + 2], b[i + 3]}};
      const VecU32x4 r = emu_mont_mul4(va, vb, k, strategy).value;
      for (std::size_t j = 0; j < 4; ++j) out[i + j] = r[j];
    }
  }
  for (std::size_t i = 4 * groups; i < a.size(); ++i) out[i] = mont_mul(a[i], b[i], params);
}

std::vector<std::uint32_t> mont_mul_batch(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                                          const ModParams& params, GatherStrategy strategy, const Target& target) {
  std::vector<std::uint32_t> out(a.size());
  if (a.size() != b.size()) {
    throw Error("mont_mul_batch: length mismatch (" + std::to_string(a.size()) + ", " +
                std::to_string(b.size()) + ")");
  }
  mont_mul_batch(a, b, out, params, strategy, target);
  return out;
}

}  // namespace vmont
