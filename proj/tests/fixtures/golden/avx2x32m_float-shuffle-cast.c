/* vmont generated kernel: isa=avx2x32m strategy=float-shuffle-cast P=2013265921 l=31 */
#include <stdint.h>
#include <stddef.h>
#include <immintrin.h>

void vmont_mont_mul_avx2x32m_float_shuffle_cast(const int32_t* a, const int32_t* b, int32_t* out, size_t n4) {
  const __m128i t0 = _mm_set1_epi32((int32_t)0x77ffffffu);
  const __m128i t1 = _mm_set1_epi32((int32_t)0x7fffffffu);
  const __m128i t2 = _mm_set1_epi32((int32_t)0x78000001u);
  const __m128i t3 = _mm_set1_epi32((int32_t)0x80000000u);
  const __m128i t4 = _mm_set1_epi32((int32_t)0xf8000000u);
  for (size_t i = 0; i < n4; ++i) {
    __m128i v_a;
    v_a = _mm_load_si128((const __m128i*)(a + 4 * i));
    __m128i v_b;
    v_b = _mm_load_si128((const __m128i*)(b + 4 * i));
    __m128i t5 = _mm_mul_epu32(v_a, v_b);
    __m128i t6 = _mm_srli_si128(v_a, 4);
    __m128i t7 = _mm_srli_si128(v_b, 4);
    __m128i t8 = _mm_mul_epu32(t6, t7);
    __m128 t9 = _mm_castsi128_ps(t5);
    __m128 t10 = _mm_castsi128_ps(t8);
    __m128 t11 = _mm_shuffle_ps(t9, t10, 0x88);
    __m128 t12 = _mm_shuffle_ps(t9, t10, 0xDD);
    __m128i t13 = _mm_castps_si128(t11);
    __m128i t14 = _mm_castps_si128(t12);
    __m128i t15 = _mm_shuffle_epi32(t13, 0xD8);
    __m128i t16 = _mm_shuffle_epi32(t14, 0xD8);
    __m128i t17 = _mm_mullo_epi32(t15, t0);
    __m128i t18 = _mm_and_si128(t17, t1);
    __m128i t19 = _mm_srli_si128(t18, 4);
    __m128i t20 = _mm_mul_epu32(t18, t2);
    __m128i t21 = _mm_mul_epu32(t19, t2);
    __m128i t22 = _mm_add_epi64(t5, t20);
    __m128i t23 = _mm_add_epi64(t8, t21);
    __m128 t24 = _mm_castsi128_ps(t22);
    __m128 t25 = _mm_castsi128_ps(t23);
    __m128 t26 = _mm_shuffle_ps(t24, t25, 0x88);
    __m128 t27 = _mm_shuffle_ps(t24, t25, 0xDD);
    __m128i t28 = _mm_castps_si128(t26);
    __m128i t29 = _mm_castps_si128(t27);
    __m128i t30 = _mm_shuffle_epi32(t28, 0xD8);
    __m128i t31 = _mm_shuffle_epi32(t29, 0xD8);
    __m128i t32 = _mm_slli_epi64(t31, 1);
    __m128i t33 = _mm_srli_epi64(t30, 31);
    __m128i t34 = _mm_add_epi32(t32, t33);
    __m128i t35 = _mm_sub_epi32(t34, t3);
    __m128i t36 = _mm_cmpgt_epi32(t35, t4);
    __m128i t37 = _mm_and_si128(t36, t2);
    __m128i v_res = _mm_sub_epi32(t34, t37);
    _mm_store_si128((__m128i*)(out + 4 * i), v_res);
  }
}
