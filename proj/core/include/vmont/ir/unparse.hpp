#pragma once

#include <string>

#include "vmont/ir/program.hpp"

namespace vmont::ir {

/// Renders a program as a self-contained C99 translation unit holding one
/// function.
///
/// Vector programs become
///   void <name>(const <ctype>* a, const <ctype>* b, <ctype>* out, size_t n4)
/// processing n4 groups of v elements through the ISA's load/store templates
/// (aligned pointers for the built-in ISAs). Scalar programs become
///   void <name>(const uint32_t* a, const uint32_t* b, uint32_t* out, size_t n)
/// The first and second IR inputs read from a and b, the output writes to
/// out; all three become locals prefixed with "v_". Throws EmitError for anything without
/// a C lowering.
std::string unparse(const KernelProgram& prog);

}  // namespace vmont::ir
