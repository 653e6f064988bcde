/* vmont generated kernel: scalar P=2013265921 l=31 */
#include <stdint.h>
#include <stddef.h>

void vmont_mont_mul_scalar(const uint32_t* a, const uint32_t* b, uint32_t* out, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    const uint32_t v_a = a[i];
    const uint32_t v_b = b[i];
    const uint64_t t0 = ((uint64_t)v_a * (uint64_t)v_b);
    const uint64_t t1 = (t0 & UINT64_C(2147483647));
    const uint64_t t2 = (t1 * UINT64_C(2013265919));
    const uint64_t t3 = (t2 & UINT64_C(2147483647));
    const uint64_t t4 = (t3 * UINT64_C(2013265921));
    const uint64_t t5 = (t0 + t4);
    const uint64_t t6 = (t5 >> 31u);
    const uint64_t t7 = (t6 - UINT64_C(2013265921));
    const int32_t t8 = (int32_t)t7;
    const int32_t t9 = (t8 >> 31u);
    const int32_t t10 = (t9 & 2013265921);
    const int32_t t11 = (int32_t)((uint32_t)t8 + (uint32_t)t10);
    const uint32_t v_res = (uint32_t)t11;
    out[i] = v_res;
  }
}
