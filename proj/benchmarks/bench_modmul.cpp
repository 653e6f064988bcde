#include <benchmark/benchmark.h>

#include <vector>

#include "vmont/modarith.hpp"
#include "vmont/rng.hpp"
#include "vmont/vkernels.hpp"

namespace {

constexpr std::uint32_t kPrime = 2013265921;
constexpr unsigned kL = 31;

struct Batch {
  std::vector<std::uint32_t> a, b, out;
};

Batch make_batch(std::size_t n, const vmont::ModParams& p) {
  vmont::SplitMix64 rng(1);
  Batch x{std::vector<std::uint32_t>(n), std::vector<std::uint32_t>(n), std::vector<std::uint32_t>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    x.a[i] = static_cast<std::uint32_t>(rng.below(p.p()));
    x.b[i] = static_cast<std::uint32_t>(rng.below(p.p()));
  }
  return x;
}

template <typename Mul>
void run_scalar(benchmark::State& state, Mul mul) {
  const vmont::ModParams p = vmont::ModParams::precompute(kPrime, kL);
  Batch x = make_batch(static_cast<std::size_t>(state.range(0)), p);
  for (auto _ : state) {
    for (std::size_t i = 0; i < x.a.size(); ++i) x.out[i] = mul(x.a[i], x.b[i], p);
    benchmark::DoNotOptimize(x.out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Naive(benchmark::State& s) {
  run_scalar(s, [](std::uint32_t a, std::uint32_t b, const vmont::ModParams& p) {
    return vmont::mod_mul_naive(a, b, p.p());
  });
}
void BM_Barrett(benchmark::State& s) {
  run_scalar(s, [](std::uint32_t a, std::uint32_t b, const vmont::ModParams& p) { return vmont::barrett_mul(a, b, p); });
}
void BM_Montgomery(benchmark::State& s) {
  run_scalar(s, [](std::uint32_t a, std::uint32_t b, const vmont::ModParams& p) { return vmont::mont_mul(a, b, p); });
}
void BM_Fourier(benchmark::State& s) {
  run_scalar(s, [](std::uint32_t a, std::uint32_t b, const vmont::ModParams& p) { return vmont::fourier_redc(a, b, p); });
}

void BM_Vector4(benchmark::State& state, vmont::GatherStrategy strategy, vmont::Target target) {
  if (strategy == vmont::GatherStrategy::BlendAvx2 && !target.has_blend) {
    state.SkipWithError("target has no blend");
    return;
  }
  const vmont::ModParams p = vmont::ModParams::precompute(kPrime, kL);
  Batch x = make_batch(static_cast<std::size_t>(state.range(0)), p);
  for (auto _ : state) {
    vmont::mont_mul_batch(x.a, x.b, x.out, p, strategy, target);
    benchmark::DoNotOptimize(x.out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Naive)->Arg(65536);
BENCHMARK(BM_Barrett)->Arg(65536);
BENCHMARK(BM_Montgomery)->Arg(65536);
BENCHMARK(BM_Fourier)->Arg(65536);
BENCHMARK_CAPTURE(BM_Vector4, host_float_shuffle_cast, vmont::GatherStrategy::FloatShuffleCast, vmont::Target::host())
    ->Arg(65536);
BENCHMARK_CAPTURE(BM_Vector4, host_shuffle_unpack, vmont::GatherStrategy::ShuffleUnpack, vmont::Target::host())
    ->Arg(65536);
BENCHMARK_CAPTURE(BM_Vector4, host_blend, vmont::GatherStrategy::BlendAvx2, vmont::Target::host())->Arg(65536);
BENCHMARK_CAPTURE(BM_Vector4, emulated_shuffle_unpack, vmont::GatherStrategy::ShuffleUnpack,
                  vmont::Target::emulated())
    ->Arg(65536);
BENCHMARK_MAIN();
