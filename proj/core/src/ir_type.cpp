#include "vmont/ir/type.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>

#include "vmont/errors.hpp"

namespace vmont::ir {
namespace {

// Position on the TBool < TUInt < TInt < TReal chain, or -1.
int chain_rank(Prim p) noexcept {
  switch (p) {
    case Prim::Bool: return 0;
    case Prim::UInt: return 1;
    case Prim::Int: return 2;
    case Prim::Real: return 3;
    default: return -1;
  }
}

bool in(Prim p, std::initializer_list<Prim> set) noexcept { return std::find(set.begin(), set.end(), p) != set.end(); }

std::optional<Prim> unify_prims(Prim a, Prim b) noexcept {
  if (a == Prim::ModInt && in(b, {Prim::Bool, Prim::UInt, Prim::Int, Prim::ModInt})) return Prim::ModInt;
  if (b == Prim::ModInt && in(a, {Prim::Bool, Prim::UInt, Prim::Int, Prim::ModInt})) return Prim::ModInt;
  if (a == Prim::Cplx && in(b, {Prim::Int, Prim::UInt, Prim::Real, Prim::Cplx})) return Prim::Cplx;
  if (b == Prim::Cplx && in(a, {Prim::Int, Prim::UInt, Prim::Real, Prim::Cplx})) return Prim::Cplx;
  if (a == b) return a;
  const int ra = chain_rank(a), rb = chain_rank(b);
  if (ra >= 0 && rb >= 0) return ra > rb ? a : b;
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<Prim> parse_prim(std::string_view s) {
  for (Prim p : kAllPrims) {
    if (s == prim_name(p)) return p;
  }
  return std::nullopt;
}

}  // namespace

IrType IrType::vect(Prim base, unsigned width) {
  if (width < 2) throw TypeError("vector width must be at least 2, got " + std::to_string(width));
  return IrType(base, width);
}

IrType TVect(IrType base, unsigned width) {
  if (base.is_vector()) throw TypeError("nested vector type TVect(" + to_string(base) + ", ...)");
  return IrType::vect(base.prim(), width);
}

std::string_view prim_name(Prim p) noexcept {
  switch (p) {
    case Prim::Bool: return "TBool";
    case Prim::Int: return "TInt";
    case Prim::UInt: return "TUInt";
    case Prim::Real: return "TReal";
    case Prim::Cplx: return "TCplx";
    case Prim::ModInt: return "TModInt";
    case Prim::ModInt64: return "TModInt64";
    case Prim::ModReal: return "TModReal";
  }
  return "?";
}

std::string to_string(const IrType& t) {
  if (!t.is_vector()) return std::string(prim_name(t.prim()));
  return "TVect(" + std::string(prim_name(t.prim())) + ", " + std::to_string(t.lanes()) + ")";
}

IrType parse_type(std::string_view text) {
  const std::string_view s = trim(text);
  if (auto p = parse_prim(s)) return *p;
  constexpr std::string_view kOpen = "TVect(";
  if (s.starts_with(kOpen) && s.ends_with(")")) {
    const std::string_view inner = s.substr(kOpen.size(), s.size() - kOpen.size() - 1);
    const auto comma = inner.find(',');
    if (comma != std::string_view::npos) {
      const auto base = parse_prim(trim(inner.substr(0, comma)));
      const std::string_view w = trim(inner.substr(comma + 1));
      unsigned width = 0;
      const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), width);
      if (base && ec == std::errc{} && ptr == w.data() + w.size()) return IrType::vect(*base, width);
    }
  }
  throw TypeError("cannot parse type '" + std::string(text) + "'");
}

bool is_integral(Prim p) noexcept {
  return in(p, {Prim::Bool, Prim::Int, Prim::UInt, Prim::ModInt, Prim::ModInt64});
}

unsigned element_bits(Prim p) noexcept {
  switch (p) {
    case Prim::Bool:
    case Prim::Int:
    case Prim::UInt:
    case Prim::ModInt:
    case Prim::Real:  // a single-precision lane inside a vector register
      return 32;
    case Prim::ModInt64: return 64;
    default: return 0;
  }
}

std::optional<IrType> try_unify(const IrType& a, const IrType& b) noexcept {
  if (a.is_vector() || b.is_vector()) {
    const auto base = unify_prims(a.prim(), b.prim());
    if (!base) return std::nullopt;
    return IrType::vect(*base, std::max(a.is_vector() ? a.lanes() : 0u, b.is_vector() ? b.lanes() : 0u));
  }
  const auto p = unify_prims(a.prim(), b.prim());
  if (!p) return std::nullopt;
  return IrType(*p);
}

IrType unify(const IrType& a, const IrType& b) {
  if (auto t = try_unify(a, b)) return *t;
  throw UnificationError("no unification rule for " + to_string(a) + " and " + to_string(b));
}

}  // namespace vmont::ir
