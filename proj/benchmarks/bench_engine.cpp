#include <benchmark/benchmark.h>

#include <numbers>

#include "efpdet/branches.hpp"
#include "efpdet/fredholm.hpp"

using namespace efpdet;

namespace {

constexpr double kPi = std::numbers::pi;

void BM_AssembleLogdet(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto p = ModelParams::make(8, -kPi / 2);
  const auto aq = build_arc<ExtendedReal>(p.psi, m);
  for (auto _ : state) benchmark::DoNotOptimize(logdet(assemble<ExtendedReal>(p, aq)).log_abs);
}
BENCHMARK(BM_AssembleLogdet)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_AssembleOnly(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto p = ModelParams::make(8, -kPi / 2);
  const auto aq = build_arc<ExtendedReal>(p.psi, m);
  for (auto _ : state) benchmark::DoNotOptimize(assemble<ExtendedReal>(p, aq));
}
BENCHMARK(BM_AssembleOnly)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_FiniteRankAssemble(benchmark::State& state) {
  const auto p = ModelParams::make(4, -kPi / 2);
  const auto aq = build_arc<ExtendedReal>(p.psi, 64);
  const auto hq = build_halfline<ExtendedReal>(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_finite_rank<ExtendedReal>(p, aq, hq));
}
BENCHMARK(BM_FiniteRankAssemble)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_GFunction(benchmark::State& state) {
  const auto ctx = BranchContext::make(-1.2);
  cplx z{0.3, 0.4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(g_fn(z, ctx));
    z *= cplx(1.0000001, 1e-7);
  }
}
BENCHMARK(BM_GFunction);

void BM_BuildHalfline(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(build_halfline(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_BuildHalfline)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
