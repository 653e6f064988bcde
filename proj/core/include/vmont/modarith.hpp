#pragma once

// Scalar word-size modular multiplication: the division-based oracle,
// Barrett, Montgomery (REDC) and the Fourier-prime REDC variant.
//
// All moduli are odd primes 3 < P < 2^31. Montgomery residues use
// R = 2^l with 2^l > P and l <= 32.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace vmont {

/// P = c * 2^n + 1 with c odd.
struct FourierForm {
  std::uint32_t c = 0;
  unsigned n = 0;

  friend bool operator==(const FourierForm&, const FourierForm&) = default;
};

/// Precomputed constants for one prime. Immutable once built; cheap to copy.
class ModParams {
 public:
  /// Throws ParamError for even P, P <= 3, P >= 2^31, composite P,
  /// l outside [1, 32] or 2^l <= P.
  static ModParams precompute(std::uint32_t p, unsigned l);

  std::uint32_t p() const noexcept { return p_; }
  unsigned l() const noexcept { return l_; }
  /// 2^l; equals 2^32 when l == 32, hence 64-bit.
  std::uint64_t r() const noexcept { return r_; }
  std::uint64_t r_mask() const noexcept { return r_ - 1; }
  /// R^-1 mod P, in (0, P).
  std::uint32_t r_inv() const noexcept { return r_inv_; }
  /// P' with R * R^-1 - P * P' = 1, in (0, R).
  std::uint32_t p_prime() const noexcept { return p_prime_; }
  std::uint32_t r2_mod_p() const noexcept { return r2_mod_p_; }
  /// k = ceil(log2 P).
  unsigned barrett_k() const noexcept { return barrett_k_; }
  /// floor(2^(2k) / P).
  std::uint64_t barrett_factor() const noexcept { return barrett_factor_; }
  /// Present iff P - 1 = c * 2^n with c odd and 2n >= l.
  const std::optional<FourierForm>& fourier() const noexcept { return fourier_; }

  friend bool operator==(const ModParams&, const ModParams&) = default;

 private:
  ModParams() = default;

  std::uint32_t p_ = 0;
  unsigned l_ = 0;
  std::uint64_t r_ = 0;
  std::uint32_t r_inv_ = 0;
  std::uint32_t p_prime_ = 0;
  std::uint32_t r2_mod_p_ = 0;
  unsigned barrett_k_ = 0;
  std::uint64_t barrett_factor_ = 0;
  std::optional<FourierForm> fourier_;
};

inline ModParams precompute_params(std::uint32_t p, unsigned l) {
  return ModParams::precompute(p, l);
}

/// (a * b) mod P through a 64-bit product and a hardware division.
constexpr std::uint32_t mod_mul_naive(std::uint32_t a, std::uint32_t b, std::uint32_t p) noexcept {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

constexpr std::uint32_t mod_add(std::uint32_t a, std::uint32_t b, std::uint32_t p) noexcept {
  const std::uint32_t s = a + b;  // < 2P < 2^32
  return s >= p ? s - p : s;
}

constexpr std::uint32_t mod_sub(std::uint32_t a, std::uint32_t b, std::uint32_t p) noexcept {
  const std::uint32_t d = a - b;
  return a < b ? d + p : d;
}

// Barrett ---------------------------------------------------------------

struct BarrettTrace {
  std::uint32_t value = 0;
  /// t = ab - qP before the correction loop; always < 4P.
  std::uint64_t pre_loop_t = 0;
  /// Number of subtractions performed; at most 3.
  unsigned iterations = 0;
};

inline BarrettTrace barrett_mul_traced(std::uint32_t a, std::uint32_t b, const ModParams& params) noexcept {
  const unsigned k = params.barrett_k();
  const std::uint64_t p = params.p();
  const std::uint64_t ab = static_cast<std::uint64_t>(a) * b;  // < 2^(2k) <= 2^62
  const std::uint64_t m = ab >> k;
  const std::uint64_t q = (m * params.barrett_factor()) >> k;
  BarrettTrace out;
  std::uint64_t t = ab - q * p;
  out.pre_loop_t = t;
  while (t >= p) {
    t -= p;
    ++out.iterations;
  }
  out.value = static_cast<std::uint32_t>(t);
  return out;
}

inline std::uint32_t barrett_mul(std::uint32_t a, std::uint32_t b, const ModParams& params) noexcept {
  return barrett_mul_traced(a, b, params).value;
}

// Montgomery ------------------------------------------------------------

struct RedcTrace {
  std::uint32_t value = 0;
  /// (T + mP) / R before the conditional subtraction; always < 2P.
  std::uint64_t pre_sub_t = 0;
  /// Low l bits of T + mP, which must be zero for the division to be exact.
  std::uint64_t discarded_bits = 0;
};

/// T * R^-1 mod P for 0 <= T < R * P.
inline RedcTrace redc_traced(std::uint64_t t, const ModParams& params) noexcept {
  const std::uint64_t mask = params.r_mask();
  const std::uint64_t m = ((t & mask) * params.p_prime()) & mask;
  const std::uint64_t sum = t + m * params.p();  // < 2RP < 2^64
  RedcTrace out;
  out.discarded_bits = sum & mask;
  out.pre_sub_t = sum >> params.l();
  const std::uint64_t p = params.p();
  out.value = static_cast<std::uint32_t>(out.pre_sub_t >= p ? out.pre_sub_t - p : out.pre_sub_t);
  return out;
}

inline std::uint32_t redc(std::uint64_t t, const ModParams& params) noexcept {
  return redc_traced(t, params).value;
}

inline std::uint32_t mont_mul(std::uint32_t abar, std::uint32_t bbar, const ModParams& params) noexcept {
  return redc(static_cast<std::uint64_t>(abar) * bbar, params);
}

inline std::uint32_t to_mont(std::uint32_t x, const ModParams& params) noexcept {
  return redc(static_cast<std::uint64_t>(x) * params.r2_mod_p(), params);
}

inline std::uint32_t from_mont(std::uint32_t xbar, const ModParams& params) noexcept {
  return redc(xbar, params);
}

// Fourier-prime REDC ----------------------------------------------------

struct FourierTrace {
  std::uint32_t value = 0;
  /// q1 - q2 + q3 before normalization; lies in [-(P-1), 2(P-1)].
  std::int64_t t = 0;
  /// c 2^n r2 mod R; identically zero when 2n >= l.
  std::uint64_t r3 = 0;
};

/// Throws ParamError when params carry no Fourier form.
namespace detail {
[[noreturn]] void throw_no_fourier_form(const ModParams& params);
}  // namespace detail

inline FourierTrace fourier_redc_traced(std::uint32_t abar, std::uint32_t bbar, const ModParams& params) {
  if (!params.fourier()) detail::throw_no_fourier_form(params);
  const unsigned l = params.l();
  const std::uint64_t mask = params.r_mask();
  const std::uint64_t c2n = params.p() - 1;  // c * 2^n

  const std::uint64_t ab = static_cast<std::uint64_t>(abar) * bbar;
  const std::uint64_t q1 = ab >> l;
  const std::uint64_t r1 = ab & mask;
  const std::uint64_t q2 = (c2n * r1) >> l;
  const std::uint64_t r2 = (c2n * r1) & mask;
  const std::uint64_t q3 = (c2n * r2) >> l;

  FourierTrace out;
  out.r3 = (c2n * r2) & mask;
  out.t = static_cast<std::int64_t>(q1) - static_cast<std::int64_t>(q2) + static_cast<std::int64_t>(q3);

  // t reaches 2(P-1), which overflows int32 once P > 2^30, so the sign-mask
  // normalization runs on a 64-bit word and shifts by 63.
  const std::int64_t p = params.p();
  std::int64_t t = out.t;
  t += (t >> 63) & p;
  t -= p;
  t += (t >> 63) & p;
  out.value = static_cast<std::uint32_t>(t);
  return out;
}

inline std::uint32_t fourier_redc(std::uint32_t abar, std::uint32_t bbar, const ModParams& params) {
  return fourier_redc_traced(abar, bbar, params).value;
}

// Fourier prime discovery ----------------------------------------------

struct FourierPrime {
  std::uint32_t p = 0;
  std::uint32_t c = 0;
  unsigned n = 0;

  friend bool operator==(const FourierPrime&, const FourierPrime&) = default;
};

/// Primes P = c * 2^n + 1 (c odd) with bit_length(P) in [bit_low, bit_high]
/// and n >= ceil(bit_length(P) / 2), ordered by descending n then ascending c.
/// At most max_count entries are returned; max_count == 0 means no limit.
/// Throws ParamError unless 3 <= bit_low <= bit_high <= 31.
std::vector<FourierPrime> find_fourier_primes(unsigned bit_low, unsigned bit_high, std::size_t max_count);

}  // namespace vmont
