#include "vmont/modarith.hpp"

#include <bit>
#include <string>

#include "vmont/errors.hpp"
#include "vmont/primality.hpp"

namespace vmont {
namespace {

// Inverse of a modulo m via the extended Euclidean algorithm; gcd(a, m) == 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r0 = m, r1 = a % m;
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    const std::int64_t r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    const std::int64_t s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw ParamError("value is not invertible modulo " + std::to_string(m));
  return s0 < 0 ? s0 + m : s0;
}

}  // namespace

ModParams ModParams::precompute(std::uint32_t p, unsigned l) {
  if (p % 2 == 0) throw ParamError("modulus must be odd, got " + std::to_string(p));
  if (p <= 3) throw ParamError("modulus must exceed 3, got " + std::to_string(p));
  if (p >= (std::uint32_t{1} << 31)) throw ParamError("modulus must be below 2^31, got " + std::to_string(p));
  if (l < 1 || l > 32) throw ParamError("l must lie in [1, 32], got " + std::to_string(l));
  if ((std::uint64_t{1} << l) <= p) {
    throw ParamError("2^" + std::to_string(l) + " does not exceed modulus " + std::to_string(p));
  }
  if (!is_prime(p)) throw ParamError("modulus " + std::to_string(p) + " is not prime");

  ModParams mp;
  mp.p_ = p;
  mp.l_ = l;
  mp.r_ = std::uint64_t{1} << l;

  const auto r_mod_p = static_cast<std::int64_t>(mp.r_ % p);
  mp.r_inv_ = static_cast<std::uint32_t>(inverse_mod(r_mod_p, p));
  // R * R^-1 < 2^63, so the Bezout identity holds exactly in 64 bits.
  mp.p_prime_ = static_cast<std::uint32_t>((mp.r_ * mp.r_inv_ - 1) / p);
  mp.r2_mod_p_ = static_cast<std::uint32_t>(static_cast<std::uint64_t>(r_mod_p) * r_mod_p % p);

  mp.barrett_k_ = bit_length(p);
  mp.barrett_factor_ = (std::uint64_t{1} << (2 * mp.barrett_k_)) / p;

  const unsigned n = static_cast<unsigned>(std::countr_zero(p - 1));
  if (2 * n >= l) mp.fourier_ = FourierForm{(p - 1) >> n, n};
  return mp;
}




namespace detail {

void throw_no_fourier_form(const ModParams& params) {
  throw ParamError("modulus " + std::to_string(params.p()) + " has no Fourier form usable with l = " +
                   std::to_string(params.l()));
}

}  // namespace detail

std::vector<FourierPrime> find_fourier_primes(unsigned bit_low, unsigned bit_high, std::size_t max_count) {
  if (bit_low < 3 || bit_low > bit_high || bit_high > 31) {
    throw ParamError("bit range must satisfy 3 <= low <= high <= 31, got [" + std::to_string(bit_low) + ", " +
                     std::to_string(bit_high) + "]");
  }
  std::vector<FourierPrime> out;
  const std::uint64_t lo = std::uint64_t{1} << (bit_low - 1);
  const std::uint64_t hi = (std::uint64_t{1} << bit_high) - 1;
  for (unsigned n = bit_high - 1; n >= 1; --n) {
    const std::uint64_t step = std::uint64_t{1} << n;
    for (std::uint64_t c = 1; c * step + 1 <= hi; c += 2) {
      const std::uint64_t p = c * step + 1;
      if (p < lo) continue;
      if (2 * n < bit_length(p)) break;  // bit length only grows with c
      if (!is_prime(p)) continue;
      out.push_back({static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(c), n});
      if (max_count != 0 && out.size() == max_count) return out;
    }
  }
  return out;
}

}  // namespace vmont
