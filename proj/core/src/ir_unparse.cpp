#include "vmont/ir/unparse.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "vmont/errors.hpp"

namespace vmont::ir {
namespace {

std::string hex32(std::uint64_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08xu", static_cast<unsigned>(v));
  return buf;
}

std::string hex_imm(unsigned v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02X", v);
  return buf;
}

bool imm_is_mask(std::string_view mnemonic) {
  return mnemonic == "shuffle_epi32" || mnemonic == "shuffle_ps" || mnemonic == "blend_epi32";
}

std::string scalar_ctype(const IrType& t) {
  if (t.is_vector()) throw EmitError("vector type " + to_string(t) + " in a scalar kernel");
  switch (t.prim()) {
    case Prim::Bool:
    case Prim::UInt:
    case Prim::ModInt: return "uint32_t";
    case Prim::Int: return "int32_t";
    case Prim::ModInt64: return "uint64_t";
    default: throw EmitError("no C type for " + to_string(t));
  }
}

std::string vector_ctype(const IrType& t) {
  switch (reg_class(t)) {
    case RegClass::Int128: return "__m128i";
    case RegClass::Float128: return "__m128";
    case RegClass::None: break;
  }
  throw EmitError("no register type for " + to_string(t));
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

class Printer {
 public:
  explicit Printer(const KernelProgram& prog) : prog_(prog) {
    for (const auto* list : {&prog.inputs, &prog.outputs}) {
      for (const IrExpr& v : *list) io_.insert(v.name);
    }
  }

  std::string name(const std::string& var) const { return io_.count(var) ? "v_" + var : var; }

  std::string expr(const IrExpr& e) const {
    const bool vec = prog_.kind == KernelProgram::Kind::Vector;
    switch (e.op) {
      case Op::Var: return name(e.name);
      case Op::Const: return vec ? vector_const(e) : scalar_const(e);
      case Op::Intrinsic: return intrinsic(e);
      case Op::Convert:
        if (vec) break;
        return "(" + scalar_ctype(*e.type) + ")" + expr(e.args[0]);
      case Op::Mul:
      case Op::Add:
      case Op::Sub:
      case Op::BAnd:
      case Op::Shl:
      case Op::Shr:
        if (vec) break;
        return scalar_binary(e);
      case Op::Decl:
      case Op::Assign: break;
    }
    throw EmitError("no C lowering for '" + std::string(op_name(e.op)) + "' in a " +
                    (vec ? "vector" : "scalar") + " kernel");
  }

 private:
  std::string scalar_const(const IrExpr& e) const {
    switch (e.type->prim()) {
      case Prim::ModInt64: return "UINT64_C(" + std::to_string(e.value) + ")";
      case Prim::Int: return std::to_string(static_cast<std::int32_t>(e.value));
      default: return std::to_string(e.value) + "u";
    }
  }

  std::string vector_const(const IrExpr& e) const {
    if (e.type->is_vector() || element_bits(e.type->prim()) != 32) {
      throw EmitError("vector constants must be 32-bit scalars to broadcast, got " + to_string(*e.type));
    }
    return "_mm_set1_epi32((int32_t)" + hex32(e.value) + ")";
  }

  std::string intrinsic(const IrExpr& e) const {
    if (!find_intrinsic(e.name)) throw EmitError("no C mapping for intrinsic '" + e.name + "'");
    if (e.name == "blend_epi32" && prog_.isa && !prog_.isa->has_blend) {
      throw EmitError("blend_epi32 is not available on ISA '" + prog_.isa->name + "'");
    }
    std::string s = "_mm_" + e.name + "(";
    for (std::size_t i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + expr(e.args[i]);
    if (e.imm) s += ", " + (imm_is_mask(e.name) ? hex_imm(*e.imm) : std::to_string(*e.imm));
    return s + ")";
  }

  // Operands of another type are cast to the node type; signed arithmetic
  // goes through uint32_t so wrap-around stays defined.
  std::string operand(const IrExpr& arg, const IrType& t) const {
    const std::string s = expr(arg);
    return arg.type && *arg.type == t ? s : "(" + scalar_ctype(t) + ")" + s;
  }

  std::string scalar_binary(const IrExpr& e) const {
    const IrType& t = *e.type;
    const std::string lhs = operand(e.args[0], t);
    const bool is_signed = t.prim() == Prim::Int;
    if (e.op == Op::Shl || e.op == Op::Shr) {
      const std::string count = expr(e.args[1]);
      if (e.op == Op::Shl && is_signed) return "(int32_t)((uint32_t)" + lhs + " << " + count + ")";
      return "(" + lhs + (e.op == Op::Shl ? " << " : " >> ") + count + ")";
    }
    const std::string rhs = operand(e.args[1], t);
    const char* op = e.op == Op::Mul ? "*" : e.op == Op::Add ? "+" : e.op == Op::Sub ? "-" : "&";
    if (is_signed && e.op != Op::BAnd) return "(int32_t)((uint32_t)" + lhs + " " + op + " (uint32_t)" + rhs + ")";
    return "(" + lhs + " " + op + " " + rhs + ")";
  }

  const KernelProgram& prog_;
  std::set<std::string> io_;
};

// Decl statements are held back and merged into the first assignment.
void emit_statements(std::ostringstream& os, const Printer& pr, const std::vector<IrExpr>& stmts,
                     const std::string& indent, bool vec, bool const_locals, std::set<std::string>& pending) {
  for (const IrExpr& stmt : stmts) {
    if (stmt.op == Op::Decl) {
      pending.insert(stmt.args[0].name);
      continue;
    }
    if (stmt.op != Op::Assign) throw EmitError("top-level statement must be decl or assign");
    const IrExpr& dest = stmt.args[0];
    if (!dest.type) throw EmitError("untyped assignment target '" + dest.name + "'");
    const std::string ctype = vec ? vector_ctype(*dest.type) : scalar_ctype(*dest.type);
    os << indent;
    if (pending.erase(dest.name)) os << (const_locals ? "const " : "") << ctype << " ";
    os << pr.name(dest.name) << " = " << pr.expr(stmt.args[1]) << ";\n";
  }
}

void emit_header(std::ostringstream& os, const KernelProgram& prog, const std::vector<std::string>& includes) {
  os << "/* vmont generated kernel: ";
  if (prog.kind == KernelProgram::Kind::Vector) {
    os << "isa=" << (prog.isa ? prog.isa->name : "?") << " strategy=" << (prog.strategy ? slug(*prog.strategy) : "?")
       << " ";
  } else {
    os << "scalar ";
  }
  os << "P=" << prog.params.p() << " l=" << prog.params.l() << " */\n";
  for (const std::string& inc : includes) os << "#include <" << inc << ">\n";
  os << "\n";
}

void check_io(const KernelProgram& prog) {
  if (prog.inputs.size() != 2 || prog.outputs.size() != 1) {
    throw EmitError("kernel programs take two inputs and one output");
  }
}

std::string unparse_vector(const KernelProgram& prog) {
  if (!prog.isa) throw EmitError("vector program without an ISA");
  const IsaDescriptor& isa = *prog.isa;
  Printer pr(prog);
  std::vector<std::string> includes = isa.includes;
  includes.push_back(isa.has_blend ? "immintrin.h" : "smmintrin.h");

  std::ostringstream os;
  emit_header(os, prog, includes);
  const std::string& ct = isa.ctype;
  const IrExpr& r = prog.outputs[0];
  os << "void " << prog.name << "(const " << ct << "* a, const " << ct << "* b, " << ct << "* out, size_t n4) {\n";

  std::set<std::string> pending;
  emit_statements(os, pr, prog.prologue, "  ", true, true, pending);
  os << "  for (size_t i = 0; i < n4; ++i) {\n";
  const auto ptr = [&](const std::string& base) { return base + " + " + std::to_string(isa.v) + " * i"; };
  for (std::size_t k = 0; k < 2; ++k) {
    const std::string local = pr.name(prog.inputs[k].name);
    os << "    " << vector_ctype(*prog.inputs[k].type) << " " << local << ";\n";
    os << "    " << replace_all(replace_all(isa.svload_init, "{var}", local), "{ptr}", ptr(k ? "b" : "a")) << "\n";
  }
  pending.insert(r.name);
  emit_statements(os, pr, prog.body, "    ", true, false, pending);
  if (pending.count(r.name)) throw EmitError("output '" + r.name + "' is never assigned");
  os << "    " << replace_all(replace_all(isa.svstore_init, "{var}", pr.name(r.name)), "{ptr}", ptr("out")) << "\n";
  os << "  }\n}\n";
  return os.str();
}

std::string unparse_scalar(const KernelProgram& prog) {
  Printer pr(prog);
  std::ostringstream os;
  emit_header(os, prog, {"stdint.h", "stddef.h"});
  const IrExpr& a = prog.inputs[0];
  const IrExpr& b = prog.inputs[1];
  const IrExpr& r = prog.outputs[0];
  const std::string ta = scalar_ctype(*a.type), tb = scalar_ctype(*b.type), tr = scalar_ctype(*r.type);
  os << "void " << prog.name << "(const " << ta << "* a, const " << tb << "* b, " << tr << "* out, size_t n) {\n";
  os << "  for (size_t i = 0; i < n; ++i) {\n";
  os << "    const " << ta << " " << pr.name(a.name) << " = a[i];\n";
  os << "    const " << tb << " " << pr.name(b.name) << " = b[i];\n";
  std::set<std::string> pending{r.name};
  emit_statements(os, pr, prog.prologue, "    ", false, true, pending);
  emit_statements(os, pr, prog.body, "    ", false, true, pending);
  if (pending.count(r.name)) throw EmitError("output '" + r.name + "' is never assigned");
  os << "    out[i] = " << pr.name(r.name) << ";\n";
  os << "  }\n}\n";
  return os.str();
}

}  // namespace

std::string unparse(const KernelProgram& prog) {
  check_io(prog);
  typecheck_program(prog);
  // Re-run the checker to get a copy with every node typed.
  KernelProgram typed = prog;
  Scope scope;
  for (const auto* list : {&prog.inputs, &prog.outputs}) {
    for (const IrExpr& v : *list) scope.emplace(v.name, *v.type);
  }
  for (auto* list : {&typed.prologue, &typed.body}) {
    for (IrExpr& stmt : *list) stmt = typecheck(stmt, scope);
  }
  return typed.kind == KernelProgram::Kind::Vector ? unparse_vector(typed) : unparse_scalar(typed);
}

}  // namespace vmont::ir
