#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace vmont::ir {

enum class Prim { Bool, Int, UInt, Real, Cplx, ModInt, ModInt64, ModReal };

inline constexpr std::array<Prim, 8> kAllPrims = {Prim::Bool,    Prim::Int,    Prim::UInt,     Prim::Real,
                                                  Prim::Cplx,    Prim::ModInt, Prim::ModInt64, Prim::ModReal};

/// A primitive type, or TVect(primitive, width) with width >= 2.
class IrType {
 public:
  constexpr IrType(Prim p) noexcept : prim_(p), width_(0) {}  // NOLINT: implicit by design of the lattice

  /// Throws TypeError for width < 2.
  static IrType vect(Prim base, unsigned width);

  constexpr bool is_vector() const noexcept { return width_ != 0; }
  /// The primitive itself, or the element type of a vector.
  constexpr Prim prim() const noexcept { return prim_; }
  /// Lane count; 1 for primitives.
  constexpr unsigned lanes() const noexcept { return width_ == 0 ? 1 : width_; }
  constexpr IrType base() const noexcept { return IrType(prim_); }

  friend constexpr bool operator==(const IrType&, const IrType&) = default;

 private:
  constexpr IrType(Prim p, unsigned w) noexcept : prim_(p), width_(w) {}

  Prim prim_;
  unsigned width_;
};

inline constexpr IrType TBool{Prim::Bool};
inline constexpr IrType TInt{Prim::Int};
inline constexpr IrType TUInt{Prim::UInt};
inline constexpr IrType TReal{Prim::Real};
inline constexpr IrType TCplx{Prim::Cplx};
inline constexpr IrType TModInt{Prim::ModInt};
inline constexpr IrType TModInt64{Prim::ModInt64};
inline constexpr IrType TModReal{Prim::ModReal};

/// TVect(base, width); base must be primitive.
IrType TVect(IrType base, unsigned width);

std::string_view prim_name(Prim p) noexcept;
/// "TModInt", "TVect(TModInt, 4)".
std::string to_string(const IrType& t);
/// Inverse of to_string; whitespace-tolerant. Throws TypeError.
IrType parse_type(std::string_view text);

bool is_integral(Prim p) noexcept;
/// Bits per element as realised by the interpreter and unparser; 0 for
/// types with no machine representation here (TCplx, TModReal).
unsigned element_bits(Prim p) noexcept;

/// Pairwise unification. Rules, first match wins:
///   TModInt with TBool/TUInt/TInt/TModInt          -> TModInt
///   TCplx with TInt/TUInt/TReal/TCplx               -> TCplx
///   TVect(a, s) with TVect(b, t)                   -> TVect(unify(a, b), max(s, t))
///   scalar with TVect(b, t)                        -> TVect(unify(scalar, b), t)
///   equal types                                    -> itself
///   TBool < TUInt < TInt < TReal                   -> the larger
/// Every other pair throws UnificationError.
IrType unify(const IrType& a, const IrType& b);
std::optional<IrType> try_unify(const IrType& a, const IrType& b) noexcept;

}  // namespace vmont::ir
