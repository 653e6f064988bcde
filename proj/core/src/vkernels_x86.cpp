#include "vkernels_hw.hpp"

#include "vmont/errors.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define VMONT_X86 1
#else
#define VMONT_X86 0
#endif

namespace vmont::hw {

#if VMONT_X86

#define VMONT_SSE41 __attribute__((target("sse4.1")))
#define VMONT_AVX2 __attribute__((target("avx2")))

bool sse41_supported() noexcept { return __builtin_cpu_supports("sse4.1"); }
bool avx2_supported() noexcept { return __builtin_cpu_supports("avx2"); }

namespace {

VMONT_SSE41 inline __m128i load(const VecU32x4& v) {
  return _mm_loadu_si128(reinterpret_cast<const __m128i*>(v.lanes.data()));
}
VMONT_SSE41 inline __m128i load(const VecU64x2& v) {
  return _mm_loadu_si128(reinterpret_cast<const __m128i*>(v.lanes.data()));
}
VMONT_SSE41 inline VecU32x4 store32(__m128i x) {
  VecU32x4 v;
  _mm_storeu_si128(reinterpret_cast<__m128i*>(v.lanes.data()), x);
  return v;
}
VMONT_SSE41 inline VecU64x2 store64(__m128i x) {
  VecU64x2 v;
  _mm_storeu_si128(reinterpret_cast<__m128i*>(v.lanes.data()), x);
  return v;
}

struct Pair {
  __m128i hi;
  __m128i lo;
};

VMONT_SSE41 inline Pair gather_fsc(__m128i even, __m128i odd) {
  const __m128 e = _mm_castsi128_ps(even);
  const __m128 o = _mm_castsi128_ps(odd);
  const __m128i lo = _mm_castps_si128(_mm_shuffle_ps(e, o, imm::kPickEven));
  const __m128i hi = _mm_castps_si128(_mm_shuffle_ps(e, o, imm::kPickOdd));
  return {_mm_shuffle_epi32(hi, imm::kInterleave), _mm_shuffle_epi32(lo, imm::kInterleave)};
}

VMONT_SSE41 inline Pair gather_su(__m128i even, __m128i odd) {
  const __m128i e = _mm_shuffle_epi32(even, imm::kInterleave);
  const __m128i o = _mm_shuffle_epi32(odd, imm::kInterleave);
  return {_mm_unpackhi_epi32(e, o), _mm_unpacklo_epi32(e, o)};
}

VMONT_AVX2 inline Pair gather_blend(__m128i even, __m128i odd) {
  const __m128i flipped = _mm_shuffle_epi32(even, imm::kSwapPairs);
  const __m128i hi = _mm_blend_epi32(flipped, odd, imm::kBlendOdd);
  const __m128i lo = _mm_blend_epi32(flipped, odd, imm::kBlendEven);
  return {hi, _mm_shuffle_epi32(lo, imm::kSwapPairs)};
}

struct Consts {
  __m128i p, p_prime, r_mask, bias, pm1_biased;
  int hi_shift, lo_shift;
};

VMONT_SSE41 inline Consts load_consts(const MontConstants4& k) {
  return {load(k.p), load(k.p_prime), load(k.r_mask), load(k.bias), load(k.p_minus_1_biased),
          static_cast<int>(k.hi_shift), static_cast<int>(k.lo_shift)};
}

VMONT_SSE41 inline __m128i reduce(__m128i v, __m128i p, __m128i bias, __m128i pm1_biased) {
  const __m128i ge = _mm_cmpgt_epi32(_mm_sub_epi32(v, bias), pm1_biased);
  return _mm_sub_epi32(v, _mm_and_si128(ge, p));
}

// The gather is a template parameter so the batch loop carries no dispatch.
template <Pair (*Gather)(__m128i, __m128i)>
VMONT_SSE41 inline __m128i kernel(__m128i a, __m128i b, const Consts& k) {
  const __m128i t_even = _mm_mul_epu32(a, b);
  const __m128i t_odd = _mm_mul_epu32(_mm_srli_si128(a, 4), _mm_srli_si128(b, 4));
  const __m128i t_lo = Gather(t_even, t_odd).lo;
  const __m128i m = _mm_and_si128(_mm_mullo_epi32(t_lo, k.p_prime), k.r_mask);
  const __m128i u_even = _mm_add_epi64(t_even, _mm_mul_epu32(m, k.p));
  const __m128i u_odd = _mm_add_epi64(t_odd, _mm_mul_epu32(_mm_srli_si128(m, 4), k.p));
  const Pair u = Gather(u_even, u_odd);
  const __m128i t = _mm_add_epi32(_mm_sll_epi64(u.hi, _mm_cvtsi32_si128(k.hi_shift)),
                                  _mm_srl_epi64(u.lo, _mm_cvtsi32_si128(k.lo_shift)));
  return reduce(t, k.p, k.bias, k.pm1_biased);
}

template <Pair (*Gather)(__m128i, __m128i)>
VMONT_SSE41 void groups_sse(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out, std::size_t groups,
                            const Consts& k) {
  for (std::size_t g = 0; g < groups; ++g) {
    const __m128i va = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + 4 * g));
    const __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + 4 * g));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + 4 * g), kernel<Gather>(va, vb, k));
  }
}

// Same instruction sequence as kernel<>, compiled for AVX2 so blend inlines.
VMONT_AVX2 inline __m128i kernel_blend(__m128i a, __m128i b, const Consts& k) {
  const __m128i t_even = _mm_mul_epu32(a, b);
  const __m128i t_odd = _mm_mul_epu32(_mm_srli_si128(a, 4), _mm_srli_si128(b, 4));
  const __m128i t_lo = gather_blend(t_even, t_odd).lo;
  const __m128i m = _mm_and_si128(_mm_mullo_epi32(t_lo, k.p_prime), k.r_mask);
  const __m128i u_even = _mm_add_epi64(t_even, _mm_mul_epu32(m, k.p));
  const __m128i u_odd = _mm_add_epi64(t_odd, _mm_mul_epu32(_mm_srli_si128(m, 4), k.p));
  const Pair u = gather_blend(u_even, u_odd);
  const __m128i t = _mm_add_epi32(_mm_sll_epi64(u.hi, _mm_cvtsi32_si128(k.hi_shift)),
                                  _mm_srl_epi64(u.lo, _mm_cvtsi32_si128(k.lo_shift)));
  const __m128i ge = _mm_cmpgt_epi32(_mm_sub_epi32(t, k.bias), k.pm1_biased);
  return _mm_sub_epi32(t, _mm_and_si128(ge, k.p));
}

VMONT_AVX2 void groups_blend(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out,
                             std::size_t groups, const Consts& k) {
  for (std::size_t g = 0; g < groups; ++g) {
    const __m128i va = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + 4 * g));
    const __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + 4 * g));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + 4 * g), kernel_blend(va, vb, k));
  }
}

}  // namespace

VMONT_SSE41 Products widen_mul_even_odd(const VecU32x4& a, const VecU32x4& b) {
  const __m128i va = load(a), vb = load(b);
  return {store64(_mm_mul_epu32(va, vb)), store64(_mm_mul_epu32(_mm_srli_si128(va, 4), _mm_srli_si128(vb, 4)))};
}

VMONT_SSE41 HiLo gather_hi_lo(const VecU64x2& even, const VecU64x2& odd, GatherStrategy strategy) {
  Pair r{};
  switch (strategy) {
    case GatherStrategy::FloatShuffleCast: r = gather_fsc(load(even), load(odd)); break;
    case GatherStrategy::ShuffleUnpack: r = gather_su(load(even), load(odd)); break;
    case GatherStrategy::BlendAvx2: r = gather_blend(load(even), load(odd)); break;
  }
  return {store32(r.hi), store32(r.lo)};
}

VMONT_SSE41 VecU32x4 mont_mul4(const VecU32x4& a, const VecU32x4& b, const MontConstants4& k,
                               GatherStrategy strategy) {
  VecU32x4 out;
  mont_mul_groups(a.lanes.data(), b.lanes.data(), out.lanes.data(), 1, k, strategy);
  return out;
}

VMONT_SSE41 VecU32x4 reduce_2p_to_p(const VecU32x4& v, std::uint32_t p) {
  const __m128i vp = _mm_set1_epi32(static_cast<int>(p));
  const __m128i bias = _mm_set1_epi32(static_cast<int>(0x80000000u));
  const __m128i pm1 = _mm_set1_epi32(static_cast<int>((p - 1) - 0x80000000u));
  return store32(reduce(load(v), vp, bias, pm1));
}

VMONT_SSE41 void mont_mul_groups(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out,
                                 std::size_t groups, const MontConstants4& k, GatherStrategy strategy) {
  const Consts c = load_consts(k);
  switch (strategy) {
    case GatherStrategy::FloatShuffleCast: groups_sse<gather_fsc>(a, b, out, groups, c); break;
    case GatherStrategy::ShuffleUnpack: groups_sse<gather_su>(a, b, out, groups, c); break;
    case GatherStrategy::BlendAvx2: groups_blend(a, b, out, groups, c); break;
  }
}

#else  // !VMONT_X86

bool sse41_supported() noexcept { return false; }
bool avx2_supported() noexcept { return false; }

Products widen_mul_even_odd(const VecU32x4&, const VecU32x4&) {
  throw UnsupportedStrategy("no SIMD backend on this platform");
}
HiLo gather_hi_lo(const VecU64x2&, const VecU64x2&, GatherStrategy) {
  throw UnsupportedStrategy("no SIMD backend on this platform");
}
VecU32x4 mont_mul4(const VecU32x4&, const VecU32x4&, const MontConstants4&, GatherStrategy) {
  throw UnsupportedStrategy("no SIMD backend on this platform");
}
VecU32x4 reduce_2p_to_p(const VecU32x4&, std::uint32_t) {
  throw UnsupportedStrategy("no SIMD backend on this platform");
}
void mont_mul_groups(const std::uint32_t*, const std::uint32_t*, std::uint32_t*, std::size_t,
                     const MontConstants4&, GatherStrategy) {
  throw UnsupportedStrategy("no SIMD backend on this platform");
}

#endif

}  // namespace vmont::hw
