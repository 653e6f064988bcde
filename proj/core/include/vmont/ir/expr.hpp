#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vmont/ir/type.hpp"

namespace vmont::ir {

enum class Op {
  Var,
  Const,
  Decl,       // args[0] is the declared Var
  Assign,     // args[0] = dest Var, args[1] = source
  Mul,
  Add,
  Sub,
  BAnd,
  Shl,
  Shr,        // arithmetic on TInt, logical otherwise
  Convert,    // value conversion of args[0] to `type`
  Intrinsic,  // `name` is the mnemonic; `imm` the immediate operand, if any
};

std::string_view op_name(Op op) noexcept;

/// One IR node. Var and Const carry their type from construction; every
/// other node gets `type` filled in by typecheck (Intrinsic and Convert
/// state theirs up front).
struct IrExpr {
  Op op = Op::Const;
  std::string name;
  std::optional<IrType> type;
  std::uint64_t value = 0;
  std::optional<unsigned> imm;
  std::vector<IrExpr> args;

  bool is_binary() const noexcept;
  friend bool operator==(const IrExpr&, const IrExpr&) = default;
};

IrExpr var(std::string name, IrType type);
IrExpr constant(std::uint64_t value, IrType type);
IrExpr decl(IrExpr v);
IrExpr assign(IrExpr dest, IrExpr src);
IrExpr mul(IrExpr a, IrExpr b);
IrExpr add(IrExpr a, IrExpr b);
IrExpr sub(IrExpr a, IrExpr b);
IrExpr band(IrExpr a, IrExpr b);
IrExpr shl(IrExpr a, IrExpr count);
IrExpr shr(IrExpr a, IrExpr count);
IrExpr convert(IrExpr a, IrType to);
IrExpr intrinsic(std::string mnemonic, std::vector<IrExpr> operands, IrType result,
                 std::optional<unsigned> imm = std::nullopt);

/// Declared variables visible to typecheck.
using Scope = std::map<std::string, IrType>;

/// Returns a copy with every node's type resolved. Decl adds its variable
/// to `scope`. Throws TypeError (undeclared or redeclared variable,
/// malformed node, bad intrinsic operands) or UnificationError.
IrExpr typecheck(const IrExpr& expr, Scope& scope);

/// Typechecks a standalone expression, treating every annotated Var in it
/// as declared with its annotation. Conflicting annotations throw TypeError.
IrExpr typecheck(const IrExpr& expr);

/// Register class a vector type occupies: integer (__m128i), float (__m128),
/// or none when it is not a 128-bit register.
enum class RegClass { None, Int128, Float128 };
RegClass reg_class(const IrType& t) noexcept;

/// Static signature of a vector intrinsic.
struct IntrinsicSig {
  std::string_view mnemonic;
  unsigned operands;       // register operands
  bool has_imm;
  RegClass operand_class;
  RegClass result_class;
};

/// nullptr for unknown mnemonics.
const IntrinsicSig* find_intrinsic(std::string_view mnemonic) noexcept;
const std::vector<IntrinsicSig>& all_intrinsics() noexcept;

std::string to_string(const IrExpr& e);

}  // namespace vmont::ir
