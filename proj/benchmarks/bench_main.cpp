#include <benchmark/benchmark.h>

#include "youngflow/drivers.hpp"
#include "youngflow/greedy.hpp"
#include "youngflow/paths.hpp"
#include "youngflow/solver.hpp"
#include "youngflow/young_integral.hpp"

using namespace youngflow;

namespace {

std::size_t samples(const benchmark::State& state) { return static_cast<std::size_t>(state.range(0)) + 1; }

void BM_PVariation(benchmark::State& state) {
    const auto w = fbm_sample({0.75, 1.0, samples(state), 1});
    for (auto _ : state) benchmark::DoNotOptimize(p_variation(w, 1.5));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PVariation)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNSquared);

void BM_FbmSample(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(fbm_sample({0.75, 1.0, samples(state), seed++}));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FbmSample)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNSquared);

void BM_YoungIntegral(benchmark::State& state) {
    const auto w = fbm_sample({0.75, 1.0, samples(state), 2});
    const auto x = fbm_sample({0.75, 1.0, samples(state), 3});
    for (auto _ : state) benchmark::DoNotOptimize(rs_sum(x, w, w.domain()));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_YoungIntegral)->RangeMultiplier(4)->Range(1024, 65536)->Complexity(benchmark::oN);

void BM_Greedy(benchmark::State& state) {
    const auto w = fbm_sample({0.75, 1.0, samples(state), 4});
    for (auto _ : state) benchmark::DoNotOptimize(greedy_sequence(w, 0.0, 1.0, 0.75, 0.4, 1.5));
}
BENCHMARK(BM_Greedy)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_SolveForward(benchmark::State& state) {
    const auto w = fbm_sample({0.75, 1.0, samples(state), 5});
    const auto field = bounded_smooth_field(2, 0.5, 0.6);
    const auto e = select_exponents(1.5, 0.75, 1.0, 1.0);
    Vector x0(2);
    x0 << 0.5, -0.3;
    SolveOptions opts;
    opts.certify = state.range(1) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(solve_forward(field, w, e, 0.0, x0, 1.0, opts));
}
BENCHMARK(BM_SolveForward)->Args({1024, 0})->Args({1024, 1})->Args({4096, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
