#include "cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "vmont/errors.hpp"
#include "vmont/ir/interpret.hpp"
#include "vmont/ir/rewrite.hpp"
#include "vmont/ir/unparse.hpp"
#include "vmont/modarith.hpp"
#include "vmont/primality.hpp"
#include "vmont/rng.hpp"
#include "vmont/vkernels.hpp"

namespace vmont::cli {
namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Usage and configuration problems; mapped to kExitUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  u64 seed = 42;
  std::string csv;
  bool quiet = false;
};

// Writes CSV text to the --csv path, or to `out` when the path is "-".
void write_csv(const Globals& g, const std::string& text, std::ostream& out) {
  if (g.csv.empty()) return;
  if (g.csv == "-") {
    out << text;
    return;
  }
  std::ofstream f(g.csv, std::ios::binary);
  if (!f) throw UsageError("cannot write CSV file '" + g.csv + "'");
  f << text;
}

ir::IsaDescriptor resolve_isa(const std::string& name_or_path) {
  if (auto isa = ir::builtin_isa(name_or_path)) return *isa;
  std::ifstream f(name_or_path, std::ios::binary);
  if (!f) {
    std::string names;
    for (const auto& n : ir::builtin_isa_names()) names += (names.empty() ? "" : ", ") + n;
    throw UsageError("unknown ISA '" + name_or_path + "' (built-in: " + names + "; otherwise a JSON file path)");
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return ir::load_isa(ss.str());
}

// gen ------------------------------------------------------------------

struct GenOptions {
  std::string isa = "sse4x32m";
  u32 prime = 0;
  unsigned l = 0;
  std::string strategy = "auto";
  std::string output;
  bool scalar = false;
};

int cmd_gen(const GenOptions& o, const Globals& g, std::ostream& out, std::ostream& err) {
  const ModParams params = ModParams::precompute(o.prime, o.l);
  std::ostream& info = o.output.empty() ? err : out;
  std::string text;
  if (o.scalar) {
    const ir::IrExpr e = ir::assign(ir::var("res", ir::TModInt), ir::mul(ir::var("a", ir::TModInt), ir::var("b", ir::TModInt)));
    text = ir::unparse(ir::rewrite_modmul_scalar(e, params));
    if (!g.quiet) info << "kernel: scalar\n";
  } else {
    const ir::IsaDescriptor isa = resolve_isa(o.isa);
    GatherStrategy strategy{};
    const bool automatic = o.strategy == "auto";
    if (automatic) {
      strategy = ir::select_strategy(isa);
    } else if (auto s = parse_strategy(o.strategy)) {
      strategy = *s;
    } else {
      throw UsageError("unknown strategy '" + o.strategy + "' (float-shuffle-cast, shuffle-unpack, blend, auto)");
    }
    if (strategy == GatherStrategy::BlendAvx2 && !isa.has_blend) {
      throw UnsupportedStrategy("strategy '" + o.strategy + "' (BlendAvx2) needs blend_epi32, which ISA '" +
                                isa.name + "' lacks");
    }
    const ir::IrType vt = ir::TVect(ir::TModInt, isa.v);
    const ir::IrExpr e = ir::assign(ir::var("res", vt), ir::mul(ir::var("a", vt), ir::var("b", vt)));
    text = ir::unparse(ir::rewrite_modmul_vec(e, isa, params, strategy));
    if (!g.quiet) {
      info << "isa: " << isa.name << "\n";
      info << "strategy: " << to_string(strategy) << (automatic ? " (auto)" : "") << ", gather cost "
           << ir::gather_cost(isa, strategy) << "\n";
    }
  }
  if (!g.quiet) {
    info << "params: P=" << params.p() << " l=" << params.l() << " P'=" << params.p_prime()
         << " R^-1=" << params.r_inv();
    if (params.fourier()) info << " fourier c=" << params.fourier()->c << " n=" << params.fourier()->n;
    info << "\n";
  }
  if (o.output.empty()) {
    out << text;
  } else {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + o.output + "'");
    f << text;
    if (!g.quiet) out << "wrote " << o.output << "\n";
  }
  return kExitOk;
}

// verify ---------------------------------------------------------------

struct VerifyOptions {
  u32 prime = 0;
  unsigned l = 0;
  std::string mode = "random";
  u64 samples = 100000;
};

struct Check {
  std::string name;
  u64 count = 0;
  u64 mismatches = 0;
  u64 bound_violations = 0;
  std::optional<std::array<u32, 4>> first;  // a, b, expected, got
  std::string note;

  void compare(u32 a, u32 b, u32 expected, u32 got) {
    ++count;
    if (expected == got) return;
    if (!first) first = {a, b, expected, got};
    ++mismatches;
  }
  void bound(bool holds) { bound_violations += holds ? 0 : 1; }
  bool pass() const { return mismatches == 0 && bound_violations == 0; }
};

struct Samples {
  std::vector<u32> a, b, expected, abar, bbar;
};

Samples make_samples(const ModParams& params, const VerifyOptions& o, u64 seed) {
  Samples s;
  const u32 p = params.p();
  if (o.mode == "exhaustive") {
    if (u64{p} * p > (u64{1} << 24)) {
      throw UsageError("exhaustive mode needs P^2 <= 2^24, P=" + std::to_string(p) + " is too large");
    }
    for (u32 a = 0; a < p; ++a) {
      for (u32 b = 0; b < p; ++b) {
        s.a.push_back(a);
        s.b.push_back(b);
      }
    }
  } else if (o.mode == "random") {
    if (o.samples == 0) throw UsageError("--samples must be positive");
    SplitMix64 rng(seed);
    for (u64 i = 0; i < o.samples; ++i) {
      s.a.push_back(static_cast<u32>(rng.below(p)));
      s.b.push_back(static_cast<u32>(rng.below(p)));
    }
  } else {
    throw UsageError("unknown mode '" + o.mode + "' (exhaustive, random)");
  }
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    s.expected.push_back(mod_mul_naive(s.a[i], s.b[i], p));
    s.abar.push_back(to_mont(s.a[i], params));
    s.bbar.push_back(to_mont(s.b[i], params));
  }
  return s;
}

// Runs `mul4` over the samples four at a time; the last group wraps around
// to the start so every lane carries a real pair.
Check check_vector(const std::string& name, const Samples& s, const ModParams& params,
                   const std::function<VecU32x4(const VecU32x4&, const VecU32x4&)>& mul4) {
  Check c{name};
  const std::size_t n = s.a.size();
  for (std::size_t base = 0; base < n; base += 4) {
    VecU32x4 va, vb;
    for (std::size_t j = 0; j < 4; ++j) {
      va[j] = s.abar[(base + j) % n];
      vb[j] = s.bbar[(base + j) % n];
    }
    const VecU32x4 r = mul4(va, vb);
    for (std::size_t j = 0; j < 4 && base + j < n; ++j) {
      const std::size_t i = base + j;
      c.compare(s.a[i], s.b[i], s.expected[i], from_mont(r[j], params));
    }
  }
  return c;
}

int cmd_verify(const VerifyOptions& o, const Globals& g, std::ostream& out) {
  const ModParams params = ModParams::precompute(o.prime, o.l);
  const Samples s = make_samples(params, o, g.seed);
  std::vector<Check> checks;

  {
    Check c{"barrett"};
    unsigned max_loop = 0;
    for (std::size_t i = 0; i < s.a.size(); ++i) {
      const BarrettTrace t = barrett_mul_traced(s.a[i], s.b[i], params);
      max_loop = std::max(max_loop, t.iterations);
      c.bound(t.iterations <= 3 && t.pre_loop_t < 4 * u64{params.p()});
      c.compare(s.a[i], s.b[i], s.expected[i], t.value);
    }
    c.note = "max loop iterations " + std::to_string(max_loop);
    checks.push_back(c);
  }
  {
    Check c{"montgomery"};
    for (std::size_t i = 0; i < s.a.size(); ++i) {
      const RedcTrace t = redc_traced(u64{s.abar[i]} * s.bbar[i], params);
      c.bound(t.pre_sub_t < 2 * u64{params.p()} && t.discarded_bits == 0);
      c.compare(s.a[i], s.b[i], s.expected[i], from_mont(t.value, params));
    }
    checks.push_back(c);
  }

  const MontConstants4 k = MontConstants4::from(params);
  std::vector<std::pair<std::string, Target>> targets = {{"emulated", Target::emulated()}};
  if (hardware_backend_available()) targets.emplace_back("hardware", Target::host());
  for (const auto& [tname, target] : targets) {
    for (GatherStrategy st : kAllStrategies) {
      if (st == GatherStrategy::BlendAvx2 && !target.has_blend) continue;
      const std::string name = "vector4/" + tname + "/" + std::string(slug(st));
      checks.push_back(check_vector(name, s, params, [&, st = st, target = target](const auto& a, const auto& b) {
        return mont_mul4(a, b, k, st, target);
      }));
    }
  }

  {
    const ir::IrExpr e =
        ir::assign(ir::var("res", ir::TModInt), ir::mul(ir::var("a", ir::TModInt), ir::var("b", ir::TModInt)));
    const ir::Interpreter interp(ir::rewrite_modmul_scalar(e, params));
    Check c{"ir-scalar"};
    for (std::size_t i = 0; i < s.a.size(); ++i) {
      const ir::Env env = interp.run({{"a", u64{s.abar[i]}}, {"b", u64{s.bbar[i]}}});
      const u32 got = static_cast<u32>(std::get<u64>(env.at("res")));
      c.compare(s.a[i], s.b[i], s.expected[i], from_mont(got, params));
    }
    checks.push_back(c);
  }
  {
    const ir::IsaDescriptor isa = *ir::builtin_isa("avx2x32m");
    const ir::IrType vt = ir::TVect(ir::TModInt, 4);
    const ir::IrExpr e = ir::assign(ir::var("res", vt), ir::mul(ir::var("a", vt), ir::var("b", vt)));
    for (GatherStrategy st : kAllStrategies) {
      const ir::Interpreter interp(ir::rewrite_modmul_vec(e, isa, params, st));
      checks.push_back(check_vector("ir-vector/" + std::string(slug(st)), s, params,
                                    [&](const VecU32x4& a, const VecU32x4& b) {
                                      return std::get<VecU32x4>(interp.run({{"a", a}, {"b", b}}).at("res"));
                                    }));
    }
  }

  std::optional<std::string> skipped;
  if (params.fourier()) {
    Check c{"fourier"};
    std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
    for (std::size_t i = 0; i < s.a.size(); ++i) {
      const FourierTrace t = fourier_redc_traced(s.abar[i], s.bbar[i], params);
      lo = std::min(lo, t.t);
      hi = std::max(hi, t.t);
      const std::int64_t pm1 = std::int64_t{params.p()} - 1;
      c.bound(t.t >= -pm1 && t.t <= 2 * pm1 && t.r3 == 0);
      c.compare(s.a[i], s.b[i], s.expected[i], from_mont(t.value, params));
    }
    c.note = "t range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    checks.push_back(c);
  } else {
    skipped = "fourier (P - 1 has too few factors of two for l=" + std::to_string(params.l()) + ")";
  }

  bool ok = true;
  std::ostringstream csv;
  csv << "algorithm,samples,mismatches,verdict\n";
  for (const Check& c : checks) {
    const bool pass = c.pass();
    ok = ok && pass;
    csv << c.name << "," << c.count << "," << c.mismatches << "," << (pass ? "pass" : "fail") << "\n";
    if (g.quiet) continue;
    out << (pass ? "PASS " : "FAIL ") << c.name << ": " << c.count << " products";
    if (!c.note.empty()) out << ", " << c.note;
    if (c.first) {
      const auto& f = *c.first;
      out << ", " << c.mismatches << " mismatches, first a=" << f[0] << " b=" << f[1] << " expected=" << f[2]
          << " got=" << f[3];
    }
    if (c.bound_violations) out << ", " << c.bound_violations << " bound violations";
    out << "\n";
  }
  if (!g.quiet && skipped) out << "SKIP " << *skipped << "\n";
  if (!g.quiet) {
    out << "verify " << (ok ? "PASS" : "FAIL") << ": P=" << params.p() << " l=" << params.l() << " mode=" << o.mode
        << " pairs=" << s.a.size() << " seed=" << g.seed << "\n";
  }
  write_csv(g, csv.str(), out);
  return ok ? kExitOk : kExitMismatch;
}

// primes ---------------------------------------------------------------

struct PrimesOptions {
  std::vector<unsigned> bits;
  std::size_t count = 0;
};

int cmd_primes(const PrimesOptions& o, const Globals& g, std::ostream& out) {
  if (o.bits.size() != 2) throw UsageError("--bits takes two values: low high");
  std::vector<FourierPrime> primes;
  try {
    primes = find_fourier_primes(o.bits[0], o.bits[1], o.count);
  } catch (const ParamError& e) {
    throw UsageError(e.what());
  }
  std::ostringstream csv;
  csv << "p,c,n,l\n";
  for (const FourierPrime& f : primes) {
    const unsigned l = bit_length(f.p);
    csv << f.p << "," << f.c << "," << f.n << "," << l << "\n";
    if (!g.quiet) out << f.p << " = " << f.c << " * 2^" << f.n << " + 1  (P=" << f.p << ", c=" << f.c
                      << ", n=" << f.n << ", l=" << l << ")\n";
  }
  write_csv(g, csv.str(), out);
  return kExitOk;
}

// bench ----------------------------------------------------------------

struct BenchOptions {
  u32 prime = 0;
  unsigned l = 0;
  std::string algorithms = "naive,barrett,montgomery,fourier,vector4";
  std::size_t batch = 65536;
  unsigned reps = 20;
};

struct Row {
  std::string algorithm;
  std::string strategy;
  u64 ops = 0;
  u64 nanos = 0;
  double mops() const { return static_cast<double>(ops) * 1000.0 / static_cast<double>(std::max<u64>(nanos, 1)); }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, sep);) {
    if (!p.empty()) parts.push_back(p);
  }
  return parts;
}

u64 median(std::vector<u64> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

int cmd_bench(const BenchOptions& o, const Globals& g, std::ostream& out, std::ostream& err) {
  if (o.reps == 0) throw UsageError("--reps must be at least 1");
  if (o.batch < 4) throw UsageError("--batch must be at least 4");
  const ModParams params = ModParams::precompute(o.prime, o.l);
  const std::vector<std::string> algorithms = split(o.algorithms, ',');
  if (algorithms.empty()) throw UsageError("--algorithms is empty");
  for (const std::string& a : algorithms) {
    if (a != "naive" && a != "barrett" && a != "montgomery" && a != "fourier" && a != "vector4") {
      throw UsageError("unknown algorithm '" + a + "' (naive, barrett, montgomery, fourier, vector4)");
    }
  }

  SplitMix64 rng(g.seed);
  const u32 p = params.p();
  std::vector<u32> a(o.batch), b(o.batch), expected(o.batch), abar(o.batch), bbar(o.batch), res(o.batch);
  for (std::size_t i = 0; i < o.batch; ++i) {
    a[i] = static_cast<u32>(rng.below(p));
    b[i] = static_cast<u32>(rng.below(p));
    expected[i] = mod_mul_naive(a[i], b[i], p);
    abar[i] = to_mont(a[i], params);
    bbar[i] = to_mont(b[i], params);
  }

  std::vector<Row> rows;
  u64 sink = 0;
  // Warm-up run, cross-check, then timed repetitions.
  const auto measure = [&](const std::string& alg, const std::string& strategy, bool mont_domain,
                           const std::function<void()>& kernel) {
    kernel();
    for (std::size_t i = 0; i < o.batch; ++i) {
      const u32 got = mont_domain ? from_mont(res[i], params) : res[i];
      if (got != expected[i]) {
        std::ostringstream msg;
        msg << "bench cross-check failed for " << alg << (strategy.empty() ? "" : "/" + strategy) << ": a=" << a[i]
            << " b=" << b[i] << " expected=" << expected[i] << " got=" << got;
        throw std::logic_error(msg.str());
      }
    }
    std::vector<u64> times;
    for (unsigned r = 0; r < o.reps; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      kernel();
      const auto t1 = std::chrono::steady_clock::now();
      times.push_back(static_cast<u64>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
      sink += res[r % o.batch];
    }
    rows.push_back({alg, strategy, o.batch, median(times)});
  };

  try {
    for (const std::string& alg : algorithms) {
      if (alg == "naive") {
        measure(alg, "", false, [&] {
          for (std::size_t i = 0; i < o.batch; ++i) res[i] = mod_mul_naive(a[i], b[i], p);
        });
      } else if (alg == "barrett") {
        measure(alg, "", false, [&] {
          for (std::size_t i = 0; i < o.batch; ++i) res[i] = barrett_mul(a[i], b[i], params);
        });
      } else if (alg == "montgomery") {
        measure(alg, "", true, [&] {
          for (std::size_t i = 0; i < o.batch; ++i) res[i] = mont_mul(abar[i], bbar[i], params);
        });
      } else if (alg == "fourier") {
        if (!params.fourier()) {
          if (!g.quiet) err << "skipping fourier: P=" << p << " has no Fourier form for l=" << params.l() << "\n";
          continue;
        }
        measure(alg, "", true, [&] {
          for (std::size_t i = 0; i < o.batch; ++i) res[i] = fourier_redc(abar[i], bbar[i], params);
        });
      } else {
        const Target target = Target::host();
        for (GatherStrategy st : kAllStrategies) {
          if (st == GatherStrategy::BlendAvx2 && !target.has_blend) continue;
          measure(alg, std::string(slug(st)), true, [&] { mont_mul_batch(abar, bbar, res, params, st, target); });
        }
      }
    }
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitMismatch;
  }

  std::ostringstream csv;
  csv << "prime,algorithm,strategy,ops,nanos,mops\n";
  for (const Row& r : rows) {
    csv << p << "," << r.algorithm << "," << r.strategy << "," << r.ops << "," << r.nanos << "," << std::fixed
        << std::setprecision(3) << r.mops() << "\n";
  }
  // Speed-up of each vector row over scalar Montgomery, as trailing comment lines.
  const auto mont = std::find_if(rows.begin(), rows.end(), [](const Row& r) { return r.algorithm == "montgomery"; });
  for (const Row& r : rows) {
    if (r.algorithm != "vector4" || mont == rows.end()) continue;
    csv << "# vector4/" << r.strategy << " vs montgomery: " << std::fixed << std::setprecision(2)
        << r.mops() / mont->mops() << "x\n";
  }
  if (!g.quiet) {
    out << csv.str();
    out << "# backend: " << (Target::host().backend == Backend::Hardware ? "hardware" : "emulated")
        << ", checksum " << (sink & 0xffff) << "\n";
  }
  write_csv(g, csv.str(), out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"vmont: word-size modular multiplication kernels, generator and checks", "vmont"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for pseudo-random samples")->capture_default_str();
  app.add_option("--csv", g.csv, "Write machine-readable output to this path ('-' for stdout)");
  app.add_flag("--quiet", g.quiet, "Suppress the human-readable report");

  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a C kernel for one prime");
  gen_cmd->add_option("--isa", gen.isa, "Built-in ISA name or JSON descriptor path")->capture_default_str();
  gen_cmd->add_option("--prime", gen.prime, "Odd prime P < 2^31")->required();
  gen_cmd->add_option("--l", gen.l, "Montgomery exponent, R = 2^l")->required();
  gen_cmd->add_option("--strategy", gen.strategy, "float-shuffle-cast, shuffle-unpack, blend or auto")
      ->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.output, "Output file (default: stdout)");
  gen_cmd->add_flag("--scalar", gen.scalar, "Emit the scalar kernel instead");

  VerifyOptions ver;
  CLI::App* ver_cmd = app.add_subcommand("verify", "Check every multiplier against the naive oracle");
  ver_cmd->add_option("--prime", ver.prime, "Odd prime P < 2^31")->required();
  ver_cmd->add_option("--l", ver.l, "Montgomery exponent, R = 2^l")->required();
  ver_cmd->add_option("--mode", ver.mode, "exhaustive or random")->capture_default_str();
  ver_cmd->add_option("--samples", ver.samples, "Random pairs to test")->capture_default_str();

  PrimesOptions pri;
  CLI::App* pri_cmd = app.add_subcommand("primes", "List Fourier primes c*2^n+1 by bit length");
  pri_cmd->add_option("--bits", pri.bits, "Bit-length range: low high")->expected(2)->required();
  pri_cmd->add_option("--count", pri.count, "Maximum number of primes (0: all)")->capture_default_str();

  BenchOptions ben;
  CLI::App* ben_cmd = app.add_subcommand("bench", "Time the multipliers over one random batch");
  ben_cmd->add_option("--prime", ben.prime, "Odd prime P < 2^31")->required();
  ben_cmd->add_option("--l", ben.l, "Montgomery exponent, R = 2^l")->required();
  ben_cmd->add_option("--algorithms", ben.algorithms, "Comma list of naive,barrett,montgomery,fourier,vector4")
      ->capture_default_str();
  ben_cmd->add_option("--batch", ben.batch, "Products per repetition")->capture_default_str();
  ben_cmd->add_option("--reps", ben.reps, "Timed repetitions")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, g, out, err);
    if (*ver_cmd) return cmd_verify(ver, g, out);
    if (*pri_cmd) return cmd_primes(pri, g, out);
    if (*ben_cmd) return cmd_bench(ben, g, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const vmont::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace vmont::cli
