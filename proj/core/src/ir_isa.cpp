#include "vmont/ir/isa.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "vmont/errors.hpp"
#include "vmont/ir/expr.hpp"

namespace vmont::ir {
namespace {

using nlohmann::json;

constexpr std::string_view kDefaultLoad = "{var} = _mm_load_si128((const __m128i*)({ptr}));";
constexpr std::string_view kDefaultStore = "_mm_store_si128((__m128i*)({ptr}), {var});";

// Non-gather rows are common Nehalem/Sandy Bridge (resp. Haswell) figures.
std::vector<CostEntry> common_costs(double int_shuffle_thr, const char* arch) {
  return {
      {"mul_epu32", 5, 1, arch},       {"mullo_epi32", 10, 0.5, arch},  {"shuffle_ps", 1, 1, arch},
      {"shuffle_epi32", 1, int_shuffle_thr, arch},                     {"unpacklo_epi32", 1, int_shuffle_thr, arch},
      {"unpackhi_epi32", 1, int_shuffle_thr, arch},                    {"castsi128_ps", 0, 1, "free reinterpretation"},
      {"castps_si128", 0, 1, "free reinterpretation"},                 {"and_si128", 1, 3, arch},
      {"add_epi32", 1, 2, arch},       {"add_epi64", 1, 2, arch},      {"sub_epi32", 1, 2, arch},
      {"cmpgt_epi32", 1, 2, arch},     {"slli_epi64", 1, 1, arch},     {"srli_epi64", 1, 1, arch},
      {"srli_si128", 1, int_shuffle_thr, arch},
  };
}

IsaDescriptor make_sse4x32m() {
  IsaDescriptor isa;
  isa.name = "sse4x32m";
  isa.info = "SSE 4-way 32-bit modular integer ISA";
  isa.v = 4;
  isa.t = TVect(TModInt, 4);
  isa.ctype = "int32_t";
  isa.includes = {"stdint.h", "stddef.h"};
  isa.has_blend = false;
  isa.cost_table = common_costs(0.5, "pre-Haswell");
  isa.svload_init = kDefaultLoad;
  isa.svstore_init = kDefaultStore;
  return isa;
}

IsaDescriptor make_avx2x32m() {
  IsaDescriptor isa = make_sse4x32m();
  isa.name = "avx2x32m";
  isa.info = "AVX2 (Haswell) 4-way 32-bit modular integer ISA";
  isa.has_blend = true;
  isa.cost_table = common_costs(1, "Haswell");
  isa.cost_table.push_back({"blend_epi32", 1, 0.33, "Haswell"});
  return isa;
}

template <typename T>
T get_field(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw IsaError(std::string("ISA config is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw IsaError(std::string("ISA config field '") + key + "' must be " + what);
  }
}

}  // namespace

const CostEntry* IsaDescriptor::cost(std::string_view mnemonic) const noexcept {
  const auto it = std::find_if(cost_table.begin(), cost_table.end(),
                               [&](const CostEntry& c) { return c.mnemonic == mnemonic; });
  return it == cost_table.end() ? nullptr : &*it;
}

std::vector<std::string> required_mnemonics(const IsaDescriptor& isa) {
  std::vector<std::string> out;
  for (const IntrinsicSig& sig : all_intrinsics()) {
    if (sig.mnemonic == "blend_epi32" && !isa.has_blend) continue;
    out.emplace_back(sig.mnemonic);
  }
  return out;
}

void validate(const IsaDescriptor& isa) {
  if (isa.name.empty()) throw IsaError("ISA name is empty");
  if (isa.v < 2) throw IsaError("ISA '" + isa.name + "': v must be at least 2");
  if (isa.t != IrType::vect(Prim::ModInt, isa.v)) {
    throw IsaError("ISA '" + isa.name + "': t is " + to_string(isa.t) + ", expected " +
                   to_string(IrType::vect(Prim::ModInt, isa.v)));
  }
  if (isa.ctype.empty()) throw IsaError("ISA '" + isa.name + "': ctype is empty");
  std::set<std::string> seen;
  for (const CostEntry& c : isa.cost_table) {
    if (!seen.insert(c.mnemonic).second) throw IsaError("ISA '" + isa.name + "': duplicate cost for " + c.mnemonic);
    if (!(c.throughput > 0) || !(c.latency >= 0)) {
      throw IsaError("ISA '" + isa.name + "': bad latency/throughput for " + c.mnemonic);
    }
  }
  for (const std::string& m : required_mnemonics(isa)) {
    if (!seen.contains(m)) throw IsaError("ISA '" + isa.name + "': cost_table has no entry for " + m);
  }
}

IsaDescriptor load_isa(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw IsaError(std::string("ISA config does not parse: ") + e.what());
  }
  if (!j.is_object()) throw IsaError("ISA config must be a JSON object");

  static const std::set<std::string> kKeys = {"name",     "info",      "v",         "element_type",
                                              "t",        "ctype",     "includes",  "has_blend",
                                              "cost_table", "svload_init", "svstore_init"};
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.contains(key)) throw IsaError("ISA config has unknown key '" + key + "'");
  }

  IsaDescriptor isa;
  isa.name = get_field<std::string>(j, "name", "a string");
  isa.info = get_field<std::string>(j, "info", "a string");
  isa.v = get_field<unsigned>(j, "v", "an unsigned integer");
  const auto element = get_field<std::string>(j, "element_type", "a string");
  if (element != "TModInt") throw IsaError("ISA config element_type must be \"TModInt\", got \"" + element + "\"");
  try {
    isa.t = j.contains("t") ? parse_type(get_field<std::string>(j, "t", "a string"))
                            : IrType::vect(Prim::ModInt, std::max(isa.v, 2u));
  } catch (const TypeError& e) {
    throw IsaError(std::string("ISA config field 't': ") + e.what());
  }
  isa.ctype = get_field<std::string>(j, "ctype", "a string");
  isa.includes = get_field<std::vector<std::string>>(j, "includes", "an array of strings");
  isa.has_blend = get_field<bool>(j, "has_blend", "a boolean");
  const json rows = get_field<json>(j, "cost_table", "an array");
  if (!rows.is_array()) throw IsaError("ISA config field 'cost_table' must be an array");
  for (const json& row : rows) {
    if (!row.is_object()) throw IsaError("cost_table rows must be objects");
    for (const auto& [key, _] : row.items()) {
      if (key != "mnemonic" && key != "latency" && key != "throughput" && key != "arch") {
        throw IsaError("cost_table row has unknown key '" + key + "'");
      }
    }
    CostEntry c;
    c.mnemonic = get_field<std::string>(row, "mnemonic", "a string");
    c.latency = get_field<double>(row, "latency", "a number");
    c.throughput = get_field<double>(row, "throughput", "a number");
    c.arch = row.contains("arch") ? get_field<std::string>(row, "arch", "a string") : std::string();
    isa.cost_table.push_back(std::move(c));
  }
  isa.svload_init = get_field<std::string>(j, "svload_init", "a string");
  isa.svstore_init = get_field<std::string>(j, "svstore_init", "a string");
  validate(isa);
  return isa;
}

std::string serialize_isa(const IsaDescriptor& isa) {
  json rows = json::array();
  for (const CostEntry& c : isa.cost_table) {
    rows.push_back({{"mnemonic", c.mnemonic}, {"latency", c.latency}, {"throughput", c.throughput}, {"arch", c.arch}});
  }
  const json j = {{"name", isa.name},
                  {"info", isa.info},
                  {"v", isa.v},
                  {"element_type", std::string(prim_name(isa.t.prim()))},
                  {"t", to_string(isa.t)},
                  {"ctype", isa.ctype},
                  {"includes", isa.includes},
                  {"has_blend", isa.has_blend},
                  {"cost_table", rows},
                  {"svload_init", isa.svload_init},
                  {"svstore_init", isa.svstore_init}};
  return j.dump(2) + "\n";
}

std::optional<IsaDescriptor> builtin_isa(std::string_view name) {
  if (name == "sse4x32m") return make_sse4x32m();
  if (name == "avx2x32m") return make_avx2x32m();
  return std::nullopt;
}

std::vector<std::string> builtin_isa_names() { return {"sse4x32m", "avx2x32m"}; }

}  // namespace vmont::ir
