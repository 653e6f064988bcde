#include "vmont/ir/rewrite.hpp"

#include <set>
#include <string>
#include <utility>

#include "vmont/errors.hpp"

namespace vmont::ir {
namespace {

const IrType kV32 = IrType::vect(Prim::ModInt, 4);
const IrType kV64 = IrType::vect(Prim::ModInt64, 2);
const IrType kVF = IrType::vect(Prim::Real, 4);

struct Match {
  IrExpr res, a, b;
};

// assign(res, mul(a, b)) with Var leaves; returns the typed Vars.
Match match_assign_mul(const IrExpr& expr) {
  const bool shape = expr.op == Op::Assign && expr.args.size() == 2 && expr.args[0].op == Op::Var &&
                     expr.args[1].op == Op::Mul && expr.args[1].args.size() == 2 &&
                     expr.args[1].args[0].op == Op::Var && expr.args[1].args[1].op == Op::Var;
  if (!shape) throw PatternMismatch("expected assign(res, mul(a, b)), got " + to_string(expr));
  const IrExpr typed = typecheck(expr);
  return {typed.args[0], typed.args[1].args[0], typed.args[1].args[1]};
}

void reject_unimplemented_modular(const IrType& t) {
  if (t.prim() == Prim::ModInt64 || t.prim() == Prim::ModReal) {
    throw NotImplemented("no multiplication rewrite for " + to_string(t));
  }
}

// Emits `decl(tN); assign(tN, value)` pairs into the current statement list.
class Emitter {
 public:
  explicit Emitter(std::vector<IrExpr>* out) : out_(out) {}

  void target(std::vector<IrExpr>* out) { out_ = out; }

  IrExpr emit(IrExpr value, IrType type) {
    IrExpr v = var("t" + std::to_string(next_++), type);
    out_->push_back(decl(v));
    out_->push_back(assign(v, std::move(value)));
    return v;
  }

  IrExpr op(std::string_view mnemonic, std::vector<IrExpr> args, IrType type,
            std::optional<unsigned> imm = std::nullopt) {
    return emit(intrinsic(std::string(mnemonic), std::move(args), type, imm), type);
  }

 private:
  std::vector<IrExpr>* out_;
  unsigned next_ = 0;
};

struct HiLoVars {
  IrExpr hi, lo;
};

HiLoVars emit_gather(Emitter& e, const IrExpr& even, const IrExpr& odd, GatherStrategy strategy) {
  switch (strategy) {
    case GatherStrategy::FloatShuffleCast: {
      const IrExpr ef = e.op("castsi128_ps", {even}, kVF);
      const IrExpr of = e.op("castsi128_ps", {odd}, kVF);
      const IrExpr lo_f = e.op("shuffle_ps", {ef, of}, kVF, imm::kPickEven);
      const IrExpr hi_f = e.op("shuffle_ps", {ef, of}, kVF, imm::kPickOdd);
      const IrExpr lo_x = e.op("castps_si128", {lo_f}, kV32);
      const IrExpr hi_x = e.op("castps_si128", {hi_f}, kV32);
      const IrExpr lo = e.op("shuffle_epi32", {lo_x}, kV32, imm::kInterleave);
      const IrExpr hi = e.op("shuffle_epi32", {hi_x}, kV32, imm::kInterleave);
      return {hi, lo};
    }
    case GatherStrategy::ShuffleUnpack: {
      const IrExpr es = e.op("shuffle_epi32", {even}, kV32, imm::kInterleave);
      const IrExpr os = e.op("shuffle_epi32", {odd}, kV32, imm::kInterleave);
      const IrExpr lo = e.op("unpacklo_epi32", {es, os}, kV32);
      const IrExpr hi = e.op("unpackhi_epi32", {es, os}, kV32);
      return {hi, lo};
    }
    case GatherStrategy::BlendAvx2: {
      const IrExpr flipped = e.op("shuffle_epi32", {even}, kV32, imm::kSwapPairs);
      const IrExpr hi = e.op("blend_epi32", {flipped, odd}, kV32, imm::kBlendOdd);
      const IrExpr lo_x = e.op("blend_epi32", {flipped, odd}, kV32, imm::kBlendEven);
      const IrExpr lo = e.op("shuffle_epi32", {lo_x}, kV32, imm::kSwapPairs);
      return {hi, lo};
    }
  }
  throw PatternMismatch("unknown gather strategy");
}

std::string kernel_name(const IsaDescriptor& isa, GatherStrategy strategy) {
  std::string s(slug(strategy));
  for (char& c : s) {
    if (c == '-') c = '_';
  }
  return "vmont_mont_mul_" + isa.name + "_" + s;
}

void walk_intrinsics(const IrExpr& e, std::vector<std::string>& out) {
  for (const IrExpr& a : e.args) walk_intrinsics(a, out);
  if (e.op == Op::Intrinsic) out.push_back(e.name);
}

}  // namespace

KernelProgram rewrite_modmul_vec(const IrExpr& expr, const IsaDescriptor& isa, const ModParams& params,
                                 GatherStrategy strategy) {
  const Match m = match_assign_mul(expr);
  const IrType& res_t = *m.res.type;
  if (!res_t.is_vector()) throw PatternMismatch("vector rewrite needs a vector result, got " + to_string(res_t));
  reject_unimplemented_modular(res_t);
  if (res_t.prim() != Prim::ModInt) throw PatternMismatch("result type " + to_string(res_t) + " is not modular");
  if (res_t.lanes() != isa.v) {
    throw PatternMismatch("result width " + std::to_string(res_t.lanes()) + " does not match ISA '" + isa.name +
                          "' width " + std::to_string(isa.v));
  }
  if (isa.v != 4) throw NotImplemented("vector rewrite exists for 4 lanes only, ISA '" + isa.name + "' has " +
                                       std::to_string(isa.v));
  for (const IrExpr* in : {&m.a, &m.b}) {
    if (reg_class(*in->type) != RegClass::Int128) {
      throw PatternMismatch("operand '" + in->name + "' of type " + to_string(*in->type) +
                            " is not a 128-bit integer register");
    }
  }
  if (strategy == GatherStrategy::BlendAvx2 && !isa.has_blend) {
    throw UnsupportedStrategy("gather strategy BlendAvx2 is not available on ISA '" + isa.name + "' (no blend)");
  }

  KernelProgram prog(KernelProgram::Kind::Vector, kernel_name(isa, strategy), params);
  prog.inputs = {m.a, m.b};
  prog.outputs = {m.res};
  prog.isa = isa;
  prog.strategy = strategy;

  Emitter e(&prog.prologue);
  const IrExpr p_prime = e.emit(constant(params.p_prime(), TModInt), kV32);
  const IrExpr r_mask = e.emit(constant(params.r_mask(), TModInt), kV32);
  const IrExpr p = e.emit(constant(params.p(), TModInt), kV32);
  const IrExpr bias = e.emit(constant(0x80000000u, TModInt), kV32);
  const IrExpr pm1_biased = e.emit(constant(static_cast<std::uint32_t>((params.p() - 1) - 0x80000000u), TModInt), kV32);

  e.target(&prog.body);
  // T = a * b as four 64-bit products.
  const IrExpr t_even = e.op("mul_epu32", {m.a, m.b}, kV64);
  const IrExpr a_odd = e.op("srli_si128", {m.a}, kV32, 4);
  const IrExpr b_odd = e.op("srli_si128", {m.b}, kV32, 4);
  const IrExpr t_odd = e.op("mul_epu32", {a_odd, b_odd}, kV64);
  const HiLoVars t = emit_gather(e, t_even, t_odd, strategy);
  // m = (T mod R) P' mod R needs only the low words.
  const IrExpr m_full = e.op("mullo_epi32", {t.lo, p_prime}, kV32);
  const IrExpr mm = e.op("and_si128", {m_full, r_mask}, kV32);
  const IrExpr m_odd = e.op("srli_si128", {mm}, kV32, 4);
  const IrExpr mp_even = e.op("mul_epu32", {mm, p}, kV64);
  const IrExpr mp_odd = e.op("mul_epu32", {m_odd, p}, kV64);
  const IrExpr u_even = e.op("add_epi64", {t_even, mp_even}, kV64);
  const IrExpr u_odd = e.op("add_epi64", {t_odd, mp_odd}, kV64);
  const HiLoVars u = emit_gather(e, u_even, u_odd, strategy);
  // (T + mP) / R from the two halves.
  const IrExpr hi_part = e.op("slli_epi64", {u.hi}, kV32, 32 - params.l());
  const IrExpr lo_part = e.op("srli_epi64", {u.lo}, kV32, params.l());
  const IrExpr sum = e.op("add_epi32", {hi_part, lo_part}, kV32);
  // Lanes >= P lose one P; unsigned compare via the 2^31 bias.
  const IrExpr sum_biased = e.op("sub_epi32", {sum, bias}, kV32);
  const IrExpr ge = e.op("cmpgt_epi32", {sum_biased, pm1_biased}, kV32);
  const IrExpr corr = e.op("and_si128", {ge, p}, kV32);
  prog.body.push_back(assign(m.res, intrinsic("sub_epi32", {sum, corr}, kV32)));
  return prog;
}

KernelProgram rewrite_modmul_scalar(const IrExpr& expr, const ModParams& params) {
  const Match m = match_assign_mul(expr);
  const IrType& res_t = *m.res.type;
  if (res_t.is_vector()) throw PatternMismatch("scalar rewrite needs a scalar result, got " + to_string(res_t));
  reject_unimplemented_modular(res_t);
  if (res_t.prim() != Prim::ModInt) throw PatternMismatch("result type " + to_string(res_t) + " is not modular");
  for (const IrExpr* in : {&m.a, &m.b}) {
    if (in->type->is_vector() || !is_integral(in->type->prim())) {
      throw PatternMismatch("operand '" + in->name + "' of type " + to_string(*in->type) + " is not an integer");
    }
  }

  KernelProgram prog(KernelProgram::Kind::Scalar, "vmont_mont_mul_scalar", params);
  prog.inputs = {m.a, m.b};
  prog.outputs = {m.res};

  const auto u64 = [](std::uint64_t v) { return constant(v, TModInt64); };
  Emitter e(&prog.body);
  const IrExpr t = e.emit(mul(convert(m.a, TModInt64), convert(m.b, TModInt64)), TModInt64);
  const IrExpr t_mod_r = e.emit(band(t, u64(params.r_mask())), TModInt64);
  const IrExpr m_full = e.emit(mul(t_mod_r, u64(params.p_prime())), TModInt64);
  const IrExpr mm = e.emit(band(m_full, u64(params.r_mask())), TModInt64);
  const IrExpr mp = e.emit(mul(mm, u64(params.p())), TModInt64);
  const IrExpr sum = e.emit(add(t, mp), TModInt64);
  const IrExpr q = e.emit(shr(sum, constant(params.l(), TUInt)), TModInt64);  // < 2P
  // q - P as a signed word; its sign bit selects whether P comes back.
  const IrExpr d64 = e.emit(sub(q, u64(params.p())), TModInt64);
  const IrExpr d = e.emit(convert(d64, TInt), TInt);
  const IrExpr sign = e.emit(shr(d, constant(31, TUInt)), TInt);
  const IrExpr back = e.emit(band(sign, constant(params.p(), TInt)), TInt);
  const IrExpr r = e.emit(add(d, back), TInt);
  prog.body.push_back(assign(m.res, convert(r, TModInt)));
  return prog;
}

void typecheck_program(const KernelProgram& prog) {
  Scope scope;
  std::set<std::string> assigned;
  for (const IrExpr& v : prog.inputs) {
    if (v.op != Op::Var || !v.type) throw TypeError("program inputs must be typed variables");
    if (!scope.emplace(v.name, *v.type).second) throw TypeError("duplicate program variable '" + v.name + "'");
    assigned.insert(v.name);
  }
  for (const IrExpr& v : prog.outputs) {
    if (v.op != Op::Var || !v.type) throw TypeError("program outputs must be typed variables");
    if (!scope.emplace(v.name, *v.type).second) throw TypeError("duplicate program variable '" + v.name + "'");
  }
  for (const auto* list : {&prog.prologue, &prog.body}) {
    for (const IrExpr& stmt : *list) {
      if (stmt.op != Op::Decl && stmt.op != Op::Assign) {
        throw TypeError("statement must be decl or assign, got " + std::string(op_name(stmt.op)));
      }
      typecheck(stmt, scope);
      if (stmt.op == Op::Assign && !assigned.insert(stmt.args[0].name).second) {
        throw TypeError("variable '" + stmt.args[0].name + "' assigned more than once");
      }
    }
  }
}

std::vector<std::string> intrinsic_mnemonics(const KernelProgram& prog) {
  std::vector<std::string> out;
  for (const auto* list : {&prog.prologue, &prog.body}) {
    for (const IrExpr& stmt : *list) walk_intrinsics(stmt, out);
  }
  return out;
}

std::vector<std::string_view> gather_sequence(GatherStrategy strategy) {
  switch (strategy) {
    case GatherStrategy::FloatShuffleCast: return {"shuffle_ps", "shuffle_ps", "shuffle_epi32", "shuffle_epi32"};
    case GatherStrategy::ShuffleUnpack: return {"shuffle_epi32", "shuffle_epi32", "unpacklo_epi32", "unpackhi_epi32"};
    case GatherStrategy::BlendAvx2: return {"shuffle_epi32", "blend_epi32", "blend_epi32", "shuffle_epi32"};
  }
  return {};
}

double gather_cost(const IsaDescriptor& isa, GatherStrategy strategy) {
  double cost = 0;
  for (std::string_view m : gather_sequence(strategy)) {
    if (const CostEntry* c = isa.cost(m)) cost += 1.0 / c->throughput;
  }
  return cost;
}

GatherStrategy select_strategy(const IsaDescriptor& isa) {
  GatherStrategy best = GatherStrategy::FloatShuffleCast;
  double best_cost = gather_cost(isa, best);
  for (GatherStrategy s : kAllStrategies) {
    if (s == GatherStrategy::BlendAvx2 && !isa.has_blend) continue;
    const double c = gather_cost(isa, s);
    if (c < best_cost) {
      best = s;
      best_cost = c;
    }
  }
  return best;
}

}  // namespace vmont::ir
