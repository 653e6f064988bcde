#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vmont/ir/type.hpp"

namespace vmont::ir {

/// One row of an ISA's instruction cost table. `throughput` is in
/// instructions per cycle; the selection cost of an instruction is its
/// reciprocal.
struct CostEntry {
  std::string mnemonic;
  double latency = 0;
  double throughput = 1;
  std::string arch;

  friend bool operator==(const CostEntry&, const CostEntry&) = default;
};

/// Declarative description of a short-vector target.
///
/// `svload_init` / `svstore_init` are statement templates spliced into the
/// emitted kernel, with `{var}` and `{ptr}` replaced by the register name
/// and the element pointer expression.
struct IsaDescriptor {
  std::string name;
  std::string info;
  unsigned v = 4;
  IrType t = IrType::vect(Prim::ModInt, 4);
  std::string ctype;
  std::vector<std::string> includes;
  bool has_blend = false;
  std::vector<CostEntry> cost_table;
  std::string svload_init;
  std::string svstore_init;

  const CostEntry* cost(std::string_view mnemonic) const noexcept;

  friend bool operator==(const IsaDescriptor&, const IsaDescriptor&) = default;
};

/// Mnemonics a descriptor must price: every intrinsic the vector rewrite
/// can emit for it (blend_epi32 only when has_blend).
std::vector<std::string> required_mnemonics(const IsaDescriptor& isa);

/// Throws IsaError unless v >= 2, t == TVect(TModInt, v), the cost table
/// prices every required mnemonic with throughput > 0 and latency >= 0,
/// and no mnemonic appears twice.
void validate(const IsaDescriptor& isa);

/// Parses the JSON descriptor format and validates it. Throws IsaError.
IsaDescriptor load_isa(std::string_view json_text);
std::string serialize_isa(const IsaDescriptor& isa);

/// "sse4x32m" (SSE4.1, no blend, pre-Haswell costs) and "avx2x32m"
/// (Haswell costs, blend available).
std::optional<IsaDescriptor> builtin_isa(std::string_view name);
std::vector<std::string> builtin_isa_names();

}  // namespace vmont::ir
