#include "vmont/ir/interpret.hpp"

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "vmont/errors.hpp"
#include "vmont/simd_emu.hpp"

namespace vmont::ir {
namespace {

unsigned bits_of(const IrType& t) {
  const unsigned b = element_bits(t.prim());
  if (b == 0 || t.prim() == Prim::Real) {
    throw InterpretError("no integer representation for " + to_string(t));
  }
  return b;
}

std::uint64_t mask_to(std::uint64_t v, unsigned bits) {
  return bits >= 64 ? v : v & ((std::uint64_t{1} << bits) - 1);
}

std::int64_t sign_extend(std::uint64_t v, unsigned bits) {
  if (bits >= 64) return static_cast<std::int64_t>(v);
  const std::uint64_t sign = std::uint64_t{1} << (bits - 1);
  return static_cast<std::int64_t>((mask_to(v, bits) ^ sign) - sign);
}

std::uint64_t scalar(const Value& v, const char* what) {
  if (const auto* s = std::get_if<std::uint64_t>(&v)) return *s;
  throw InterpretError(std::string(what) + ": expected a scalar, got a vector");
}

const VecU32x4& vector(const Value& v, const std::string& what) {
  if (const auto* r = std::get_if<VecU32x4>(&v)) return *r;
  throw InterpretError(what + ": expected a vector, got a scalar");
}

// Lane view of a 128-bit register at 32 or 64 bits per lane.
std::vector<std::uint64_t> lanes_of(const VecU32x4& r, unsigned bits) {
  if (bits == 64) {
    const VecU64x2 w = as_u64x2(r);
    return {w[0], w[1]};
  }
  return {r[0], r[1], r[2], r[3]};
}

VecU32x4 from_lanes(const std::vector<std::uint64_t>& l, unsigned bits) {
  if (bits == 64) return as_u32x4(VecU64x2{{l[0], l[1]}});
  VecU32x4 r;
  for (std::size_t i = 0; i < 4; ++i) r[i] = static_cast<std::uint32_t>(l[i]);
  return r;
}

VecU32x4 broadcast(std::uint64_t v, const IrType& vt) {
  const unsigned bits = bits_of(vt.base());
  if (bits * vt.lanes() != 128) throw InterpretError("vector type " + to_string(vt) + " is not 128 bits wide");
  return from_lanes(std::vector<std::uint64_t>(vt.lanes(), mask_to(v, bits)), bits);
}

std::uint64_t apply(Op op, std::uint64_t a, std::uint64_t b, Prim prim, unsigned bits) {
  switch (op) {
    case Op::Mul: return mask_to(a * b, bits);
    case Op::Add: return mask_to(a + b, bits);
    case Op::Sub: return mask_to(a - b, bits);
    case Op::BAnd: return a & b;
    case Op::Shl: return b >= bits ? 0 : mask_to(a << b, bits);
    case Op::Shr:
      if (prim == Prim::Int) {
        const std::int64_t s = sign_extend(a, bits);
        return mask_to(static_cast<std::uint64_t>(s >> (b >= bits ? bits - 1 : b)), bits);
      }
      return b >= bits ? 0 : a >> b;
    default: throw InterpretError("not a binary operator: " + std::string(op_name(op)));
  }
}

Value eval_binary(const IrExpr& e, const Env& env) {
  const IrType& t = *e.type;
  const Value lhs = evaluate(e.args[0], env);
  const Value rhs = evaluate(e.args[1], env);
  const unsigned bits = bits_of(t.base());
  const bool shift = e.op == Op::Shl || e.op == Op::Shr;
  if (!t.is_vector()) {
    return apply(e.op, scalar(lhs, "binary operand"), scalar(rhs, "binary operand"), t.prim(), bits);
  }
  const auto lane_values = [&](const Value& v) {
    if (const auto* s = std::get_if<std::uint64_t>(&v)) return std::vector<std::uint64_t>(t.lanes(), *s);
    return lanes_of(std::get<VecU32x4>(v), bits);
  };
  if (bits * t.lanes() != 128) throw InterpretError("vector type " + to_string(t) + " is not 128 bits wide");
  std::vector<std::uint64_t> a = lane_values(lhs);
  const std::vector<std::uint64_t> b = shift ? std::vector<std::uint64_t>(t.lanes(), scalar(rhs, "shift count"))
                                             : lane_values(rhs);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = apply(e.op, a[i], b[i], t.prim(), bits);
  return from_lanes(a, bits);
}

using Unary = emu::Reg (*)(const emu::Reg&);
using Binary = emu::Reg (*)(const emu::Reg&, const emu::Reg&);
using UnaryImm = emu::Reg (*)(const emu::Reg&, unsigned);
using BinaryImm = emu::Reg (*)(const emu::Reg&, const emu::Reg&, unsigned);

emu::Reg identity(const emu::Reg& r) { return r; }

Value eval_intrinsic(const IrExpr& e, const Env& env) {
  std::vector<VecU32x4> ops;
  for (const IrExpr& a : e.args) ops.push_back(vector(evaluate(a, env), "operand of '" + e.name + "'"));
  const auto need = [&](std::size_t n, bool imm) {
    if (ops.size() != n || e.imm.has_value() != imm) {
      throw InterpretError("malformed intrinsic '" + e.name + "'");
    }
  };
  static const std::map<std::string, Unary, std::less<>> kUnary = {
      {"castsi128_ps", identity}, {"castps_si128", identity}};
  static const std::map<std::string, Binary, std::less<>> kBinary = {
      {"mul_epu32", emu::mul_epu32},     {"mullo_epi32", emu::mullo_epi32},
      {"unpacklo_epi32", emu::unpacklo_epi32}, {"unpackhi_epi32", emu::unpackhi_epi32},
      {"and_si128", emu::and_si128},     {"add_epi32", emu::add_epi32},
      {"add_epi64", emu::add_epi64},     {"sub_epi32", emu::sub_epi32},
      {"cmpgt_epi32", emu::cmpgt_epi32}};
  static const std::map<std::string, UnaryImm, std::less<>> kUnaryImm = {
      {"shuffle_epi32", emu::shuffle_epi32}, {"slli_epi64", emu::slli_epi64},
      {"srli_epi64", emu::srli_epi64},       {"srli_si128", emu::srli_si128}};
  static const std::map<std::string, BinaryImm, std::less<>> kBinaryImm = {
      {"shuffle_ps", emu::shuffle_ps}, {"blend_epi32", emu::blend_epi32}};

  if (const auto it = kUnary.find(e.name); it != kUnary.end()) {
    need(1, false);
    return it->second(ops[0]);
  }
  if (const auto it = kBinary.find(e.name); it != kBinary.end()) {
    need(2, false);
    return it->second(ops[0], ops[1]);
  }
  if (const auto it = kUnaryImm.find(e.name); it != kUnaryImm.end()) {
    need(1, true);
    return it->second(ops[0], *e.imm);
  }
  if (const auto it = kBinaryImm.find(e.name); it != kBinaryImm.end()) {
    need(2, true);
    return it->second(ops[0], ops[1], *e.imm);
  }
  throw InterpretError("unknown intrinsic '" + e.name + "'");
}

Value coerce(const Value& v, const IrType& dest, const std::string& name) {
  if (dest.is_vector()) {
    if (const auto* s = std::get_if<std::uint64_t>(&v)) return broadcast(*s, dest);
    return v;
  }
  return mask_to(scalar(v, ("assignment to '" + name + "'").c_str()), bits_of(dest));
}

}  // namespace

Value evaluate(const IrExpr& e, const Env& env) {
  switch (e.op) {
    case Op::Var: {
      const auto it = env.find(e.name);
      if (it == env.end()) throw InterpretError("unbound variable '" + e.name + "'");
      return it->second;
    }
    case Op::Const:
      if (!e.type) throw InterpretError("untyped constant");
      if (e.type->is_vector()) return broadcast(e.value, *e.type);
      return mask_to(e.value, bits_of(*e.type));
    case Op::Mul:
    case Op::Add:
    case Op::Sub:
    case Op::BAnd:
    case Op::Shl:
    case Op::Shr:
      if (!e.type) throw InterpretError("untyped " + std::string(op_name(e.op)) + " node");
      return eval_binary(e, env);
    case Op::Convert: {
      const IrType& from = *e.args[0].type;
      const std::uint64_t v = scalar(evaluate(e.args[0], env), "convert");
      const unsigned from_bits = bits_of(from);
      const std::uint64_t wide =
          from.prim() == Prim::Int ? static_cast<std::uint64_t>(sign_extend(v, from_bits)) : v;
      return mask_to(wide, bits_of(*e.type));
    }
    case Op::Intrinsic: return eval_intrinsic(e, env);
    case Op::Decl:
    case Op::Assign: break;
  }
  throw InterpretError("statement '" + std::string(op_name(e.op)) + "' is not an expression");
}

Interpreter::Interpreter(const KernelProgram& prog) : inputs_(prog.inputs) {
  Scope scope;
  for (const auto* list : {&prog.inputs, &prog.outputs}) {
    for (const IrExpr& v : *list) {
      if (v.op != Op::Var || !v.type) throw InterpretError("program inputs and outputs must be typed variables");
      scope.emplace(v.name, *v.type);
    }
  }
  for (const auto* list : {&prog.prologue, &prog.body}) {
    for (const IrExpr& stmt : *list) {
      if (stmt.op != Op::Decl && stmt.op != Op::Assign) {
        throw InterpretError("statement must be decl or assign, got " + std::string(op_name(stmt.op)));
      }
      IrExpr typed;
      try {
        typed = typecheck(stmt, scope);
      } catch (const TypeError& e) {
        // Unknown mnemonics and undeclared variables surface here.
        throw InterpretError(e.what());
      }
      if (typed.op == Op::Assign) statements_.push_back(std::move(typed));
    }
  }
}

Env Interpreter::run(Env env) const {
  for (const IrExpr& v : inputs_) {
    const auto it = env.find(v.name);
    if (it == env.end()) throw InterpretError("no value for input '" + v.name + "'");
    if (v.type->is_vector() != std::holds_alternative<VecU32x4>(it->second)) {
      throw InterpretError("input '" + v.name + "' has the wrong shape for " + to_string(*v.type));
    }
  }
  for (const IrExpr& stmt : statements_) {
    const IrExpr& dest = stmt.args[0];
    env[dest.name] = coerce(evaluate(stmt.args[1], env), *dest.type, dest.name);
  }
  return env;
}

Env interpret(const KernelProgram& prog, Env env) { return Interpreter(prog).run(std::move(env)); }

}  // namespace vmont::ir
