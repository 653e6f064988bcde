#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vmont/ir/expr.hpp"
#include "vmont/ir/isa.hpp"
#include "vmont/modarith.hpp"
#include "vmont/vkernels.hpp"

namespace vmont::ir {

/// A rewritten multiplication: inputs and output are Vars, `prologue` holds
/// loop-invariant constant set-up and `body` the per-element chain. Both are
/// sequences of Decl and Assign statements.
struct KernelProgram {
  enum class Kind { Scalar, Vector };

  KernelProgram(Kind k, std::string n, const ModParams& p) : kind(k), name(std::move(n)), params(p) {}

  Kind kind;
  std::string name;
  ModParams params;
  std::vector<IrExpr> inputs;
  std::vector<IrExpr> outputs;
  std::vector<IrExpr> prologue;
  std::vector<IrExpr> body;
  std::optional<IsaDescriptor> isa;
  std::optional<GatherStrategy> strategy;
};

/// Typechecks every statement in order, with inputs and outputs in scope,
/// and enforces single assignment of every variable. Throws TypeError.
void typecheck_program(const KernelProgram& prog);

/// Mnemonics of every Intrinsic node, in statement order.
std::vector<std::string> intrinsic_mnemonics(const KernelProgram& prog);

}  // namespace vmont::ir
