#pragma once

#include <string_view>
#include <vector>

#include "vmont/ir/program.hpp"

namespace vmont::ir {

/// Expands assign(res, mul(a, b)) with res : TVect(TModInt, isa.v) into the
/// four-lane Montgomery instruction chain for `strategy`. Temporaries are
/// named t0, t1, ... in emission order.
/// Throws PatternMismatch, UnsupportedStrategy (blend without has_blend),
/// NotImplemented (TModInt64 / TModReal elements, or isa.v != 4).
KernelProgram rewrite_modmul_vec(const IrExpr& expr, const IsaDescriptor& isa, const ModParams& params,
                                 GatherStrategy strategy);

/// Expands assign(res, mul(a, b)) with res : TModInt into scalar REDC.
KernelProgram rewrite_modmul_scalar(const IrExpr& expr, const ModParams& params);

/// Gather instructions each strategy issues per gather, excluding the
/// free float/int casts.
std::vector<std::string_view> gather_sequence(GatherStrategy strategy);

/// Sum of 1/throughput over gather_sequence(strategy). Mnemonics missing
/// from the cost table contribute nothing.
double gather_cost(const IsaDescriptor& isa, GatherStrategy strategy);

/// Cheapest available strategy; ties go to the earlier enumerator and
/// BlendAvx2 is skipped without has_blend.
GatherStrategy select_strategy(const IsaDescriptor& isa);

}  // namespace vmont::ir
