#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "vmont/ir/program.hpp"
#include "vmont/vec.hpp"

namespace vmont::ir {

/// A scalar holds its bits zero-extended to 64; a vector holds the raw 128
/// bits of its register whatever the element type.
using Value = std::variant<std::uint64_t, VecU32x4>;
using Env = std::map<std::string, Value>;

/// Runs the program's statements over `inputs` and returns the final
/// environment (inputs, temporaries and outputs). Arithmetic wraps at the
/// element width of the node's type; Shr is arithmetic on TInt. Assigning a
/// scalar to a vector variable broadcasts it. Throws InterpretError for
/// unbound variables, unknown mnemonics, values of the wrong shape and
/// types without a machine representation.
Env interpret(const KernelProgram& prog, Env inputs);

/// Typechecks once, then runs many times; interpret() in a loop without the
/// repeated checking.
class Interpreter {
 public:
  explicit Interpreter(const KernelProgram& prog);
  Env run(Env inputs) const;

 private:
  std::vector<IrExpr> inputs_;
  std::vector<IrExpr> statements_;  // typed Assigns, in order
};

/// Evaluates one typed expression against `env`.
Value evaluate(const IrExpr& expr, const Env& env);

}  // namespace vmont::ir
