// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "topologic/algebra.hpp"
#include "topologic/decide.hpp"
#include "topologic/frames.hpp"
#include "topologic/semantics.hpp"

namespace topologic {
namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

// Chain of n points with A at the bottom point; n(n+1)/2 worlds.
Model chain(std::size_t n) {
  std::vector<PointSet> opens{0};
  for (std::size_t k = 1; k <= n; ++k) opens.push_back(full_set(k));
  return Model(SubsetSpace::numbered(n, opens), {{"A", 1}, {"B", full_set(n) & ~PointSet{1}}});
}

void BM_Extension(benchmark::State& state) {
  Model m = chain(20);
  Formula f = parse("[] (K <> (A | L B) -> <> K ~B) & L [] (A -> K L B)");
  for (auto _ : state) benchmark::DoNotOptimize(extension(m, f, mode(state)));
}
BENCHMARK(BM_Extension)->Arg(0)->Arg(1);

void BM_DecideValid(benchmark::State& state) {
  SearchBudget b;
  b.max_points = 3;
  b.exec = mode(state);
  Formula f = parse("<> (K phi & psi) & L <> (K phi & chi) -> <> (K <> phi & <> psi & L <> chi)");
  for (auto _ : state) benchmark::DoNotOptimize(decide_valid(f, b));
}
BENCHMARK(BM_DecideValid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FrameConditions(benchmark::State& state) {
  std::vector<PointSet> all;
  for (PointSet s = 0; s < 32; ++s) all.push_back(s);
  BimodalFrame f = subset_frame(SubsetSpace::numbered(5, all)).frame;
  for (auto _ : state) benchmark::DoNotOptimize(check_conditions(f, mode(state)));
}
BENCHMARK(BM_FrameConditions)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GmaLaws(benchmark::State& state) {
  ComplexAlgebra c = complex_algebra(chain(4));
  for (auto _ : state) benchmark::DoNotOptimize(check_gma_laws(c.algebra, mode(state)));
}
BENCHMARK(BM_GmaLaws)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace topologic

BENCHMARK_MAIN();
