#pragma once

// Intrinsic backend. Declared for every platform; on non-x86 builds the
// probes report false and the kernels are never reached.

#include <cstdint>
#include <span>

#include "vmont/vkernels.hpp"

namespace vmont::hw {

bool sse41_supported() noexcept;
bool avx2_supported() noexcept;

Products widen_mul_even_odd(const VecU32x4& a, const VecU32x4& b);
HiLo gather_hi_lo(const VecU64x2& even, const VecU64x2& odd, GatherStrategy strategy);
VecU32x4 mont_mul4(const VecU32x4& a, const VecU32x4& b, const MontConstants4& k, GatherStrategy strategy);
VecU32x4 reduce_2p_to_p(const VecU32x4& v, std::uint32_t p);
/// Processes a.size() / 4 whole groups; the caller handles the tail.
void mont_mul_groups(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out, std::size_t groups,
                     const MontConstants4& k, GatherStrategy strategy);

}  // namespace vmont::hw
