#include "vmont/ir/expr.hpp"

#include <algorithm>
#include <utility>

#include "vmont/errors.hpp"

namespace vmont::ir {
namespace {

IrExpr node(Op op, std::vector<IrExpr> args) {
  IrExpr e;
  e.op = op;
  e.args = std::move(args);
  return e;
}

const IrType& type_of(const IrExpr& e) {
  if (!e.type) throw TypeError("untyped " + std::string(op_name(e.op)) + " node");
  return *e.type;
}

IrType check_var(const IrExpr& v, const Scope& scope) {
  const auto it = scope.find(v.name);
  if (it == scope.end()) throw TypeError("undeclared variable '" + v.name + "'");
  if (v.type && *v.type != it->second) {
    throw TypeError("variable '" + v.name + "' used as " + to_string(*v.type) + " but declared " +
                    to_string(it->second));
  }
  return it->second;
}

void expect_arity(const IrExpr& e, std::size_t n) {
  if (e.args.size() != n) {
    throw TypeError(std::string(op_name(e.op)) + " expects " + std::to_string(n) + " operands, got " +
                    std::to_string(e.args.size()));
  }
}

}  // namespace

std::string_view op_name(Op op) noexcept {
  switch (op) {
    case Op::Var: return "var";
    case Op::Const: return "const";
    case Op::Decl: return "decl";
    case Op::Assign: return "assign";
    case Op::Mul: return "mul";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::BAnd: return "band";
    case Op::Shl: return "shl";
    case Op::Shr: return "shr";
    case Op::Convert: return "convert";
    case Op::Intrinsic: return "intrinsic";
  }
  return "?";
}

bool IrExpr::is_binary() const noexcept {
  switch (op) {
    case Op::Mul:
    case Op::Add:
    case Op::Sub:
    case Op::BAnd:
    case Op::Shl:
    case Op::Shr: return true;
    default: return false;
  }
}

IrExpr var(std::string name, IrType type) {
  IrExpr e;
  e.op = Op::Var;
  e.name = std::move(name);
  e.type = type;
  return e;
}

IrExpr constant(std::uint64_t value, IrType type) {
  IrExpr e;
  e.op = Op::Const;
  e.value = value;
  e.type = type;
  return e;
}

IrExpr decl(IrExpr v) { return node(Op::Decl, {std::move(v)}); }
IrExpr assign(IrExpr dest, IrExpr src) { return node(Op::Assign, {std::move(dest), std::move(src)}); }
IrExpr mul(IrExpr a, IrExpr b) { return node(Op::Mul, {std::move(a), std::move(b)}); }
IrExpr add(IrExpr a, IrExpr b) { return node(Op::Add, {std::move(a), std::move(b)}); }
IrExpr sub(IrExpr a, IrExpr b) { return node(Op::Sub, {std::move(a), std::move(b)}); }
IrExpr band(IrExpr a, IrExpr b) { return node(Op::BAnd, {std::move(a), std::move(b)}); }
IrExpr shl(IrExpr a, IrExpr count) { return node(Op::Shl, {std::move(a), std::move(count)}); }
IrExpr shr(IrExpr a, IrExpr count) { return node(Op::Shr, {std::move(a), std::move(count)}); }

IrExpr convert(IrExpr a, IrType to) {
  IrExpr e = node(Op::Convert, {std::move(a)});
  e.type = to;
  return e;
}

IrExpr intrinsic(std::string mnemonic, std::vector<IrExpr> operands, IrType result, std::optional<unsigned> imm) {
  IrExpr e = node(Op::Intrinsic, std::move(operands));
  e.name = std::move(mnemonic);
  e.type = result;
  e.imm = imm;
  return e;
}

RegClass reg_class(const IrType& t) noexcept {
  if (!t.is_vector()) return RegClass::None;
  if (t.prim() == Prim::Real && t.lanes() == 4) return RegClass::Float128;
  if (is_integral(t.prim()) && element_bits(t.prim()) * t.lanes() == 128) return RegClass::Int128;
  return RegClass::None;
}

const std::vector<IntrinsicSig>& all_intrinsics() noexcept {
  using R = RegClass;
  static const std::vector<IntrinsicSig> kSigs = {
      {"mul_epu32", 2, false, R::Int128, R::Int128},      {"mullo_epi32", 2, false, R::Int128, R::Int128},
      {"shuffle_epi32", 1, true, R::Int128, R::Int128},   {"shuffle_ps", 2, true, R::Float128, R::Float128},
      {"castsi128_ps", 1, false, R::Int128, R::Float128}, {"castps_si128", 1, false, R::Float128, R::Int128},
      {"unpacklo_epi32", 2, false, R::Int128, R::Int128}, {"unpackhi_epi32", 2, false, R::Int128, R::Int128},
      {"blend_epi32", 2, true, R::Int128, R::Int128},     {"and_si128", 2, false, R::Int128, R::Int128},
      {"add_epi32", 2, false, R::Int128, R::Int128},      {"add_epi64", 2, false, R::Int128, R::Int128},
      {"sub_epi32", 2, false, R::Int128, R::Int128},      {"cmpgt_epi32", 2, false, R::Int128, R::Int128},
      {"slli_epi64", 1, true, R::Int128, R::Int128},      {"srli_epi64", 1, true, R::Int128, R::Int128},
      {"srli_si128", 1, true, R::Int128, R::Int128},
  };
  return kSigs;
}

const IntrinsicSig* find_intrinsic(std::string_view mnemonic) noexcept {
  const auto& sigs = all_intrinsics();
  const auto it = std::find_if(sigs.begin(), sigs.end(), [&](const auto& s) { return s.mnemonic == mnemonic; });
  return it == sigs.end() ? nullptr : &*it;
}

IrExpr typecheck(const IrExpr& expr, Scope& scope) {
  IrExpr out = expr;
  switch (expr.op) {
    case Op::Var:
      out.type = check_var(expr, scope);
      return out;

    case Op::Const:
      if (!expr.type) throw TypeError("constant without a type");
      return out;

    case Op::Decl: {
      expect_arity(expr, 1);
      const IrExpr& v = expr.args[0];
      if (v.op != Op::Var || !v.type) throw TypeError("decl expects a typed variable");
      if (!scope.emplace(v.name, *v.type).second) throw TypeError("variable '" + v.name + "' declared twice");
      out.type = v.type;
      return out;
    }

    case Op::Assign: {
      expect_arity(expr, 2);
      if (expr.args[0].op != Op::Var) throw TypeError("assignment target must be a variable");
      out.args[0] = typecheck(expr.args[0], scope);
      out.args[1] = typecheck(expr.args[1], scope);
      const IrType& dest = type_of(out.args[0]);
      const IrType& src = type_of(out.args[1]);
      if (unify(src, dest) != dest) {
        throw TypeError("cannot assign " + to_string(src) + " to '" + expr.args[0].name + "' of type " +
                        to_string(dest));
      }
      out.type = dest;
      return out;
    }

    case Op::Mul:
    case Op::Add:
    case Op::Sub:
    case Op::BAnd: {
      expect_arity(expr, 2);
      out.args[0] = typecheck(expr.args[0], scope);
      out.args[1] = typecheck(expr.args[1], scope);
      const IrType t = unify(type_of(out.args[0]), type_of(out.args[1]));
      if (expr.op == Op::BAnd && !is_integral(t.prim())) throw TypeError("band on non-integral " + to_string(t));
      out.type = t;
      return out;
    }

    case Op::Shl:
    case Op::Shr: {
      expect_arity(expr, 2);
      out.args[0] = typecheck(expr.args[0], scope);
      out.args[1] = typecheck(expr.args[1], scope);
      const IrType& value = type_of(out.args[0]);
      const IrType& count = type_of(out.args[1]);
      if (!is_integral(value.prim())) throw TypeError("shift of non-integral " + to_string(value));
      if (count.is_vector() || !is_integral(count.prim())) {
        throw TypeError("shift count must be an integral scalar, got " + to_string(count));
      }
      out.type = value;
      return out;
    }

    case Op::Convert: {
      expect_arity(expr, 1);
      out.args[0] = typecheck(expr.args[0], scope);
      const IrType& from = type_of(out.args[0]);
      const IrType& to = type_of(expr);
      if (from.is_vector() || to.is_vector() || !is_integral(from.prim()) || !is_integral(to.prim())) {
        throw TypeError("convert supports integral scalars only: " + to_string(from) + " -> " + to_string(to));
      }
      return out;
    }

    case Op::Intrinsic: {
      const IntrinsicSig* sig = find_intrinsic(expr.name);
      if (!sig) throw TypeError("unknown intrinsic '" + expr.name + "'");
      expect_arity(expr, sig->operands);
      if (sig->has_imm != expr.imm.has_value()) {
        throw TypeError("intrinsic '" + expr.name + (sig->has_imm ? "' needs" : "' takes no") + " immediate");
      }
      for (std::size_t i = 0; i < expr.args.size(); ++i) {
        out.args[i] = typecheck(expr.args[i], scope);
        if (reg_class(type_of(out.args[i])) != sig->operand_class) {
          throw TypeError("operand " + std::to_string(i) + " of '" + expr.name + "' has type " +
                          to_string(type_of(out.args[i])) + ", wrong register class");
        }
      }
      if (reg_class(type_of(expr)) != sig->result_class) {
        throw TypeError("result type " + to_string(type_of(expr)) + " of '" + expr.name +
                        "' has the wrong register class");
      }
      return out;
    }
  }
  throw TypeError("unknown node");
}

namespace {

void collect_vars(const IrExpr& e, Scope& scope) {
  if (e.op == Op::Var && e.type) {
    const auto [it, inserted] = scope.emplace(e.name, *e.type);
    if (!inserted && it->second != *e.type) {
      throw TypeError("variable '" + e.name + "' annotated as both " + to_string(it->second) + " and " +
                      to_string(*e.type));
    }
  }
  if (e.op == Op::Decl) return;
  for (const IrExpr& a : e.args) collect_vars(a, scope);
}

}  // namespace

IrExpr typecheck(const IrExpr& expr) {
  Scope scope;
  collect_vars(expr, scope);
  return typecheck(expr, scope);
}

std::string to_string(const IrExpr& e) {
  switch (e.op) {
    case Op::Var: return e.name;
    case Op::Const: return std::to_string(e.value);
    case Op::Decl: return "decl(" + to_string(e.args[0]) + ")";
    case Op::Intrinsic: {
      std::string s = e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + to_string(e.args[i]);
      if (e.imm) s += (e.args.empty() ? "" : ", ") + std::to_string(*e.imm);
      return s + ")";
    }
    case Op::Convert: return "convert(" + to_string(e.args[0]) + ", " + to_string(*e.type) + ")";
    default: {
      std::string s = std::string(op_name(e.op)) + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + to_string(e.args[i]);
      return s + ")";
    }
  }
}

}  // namespace vmont::ir
