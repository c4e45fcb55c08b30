#include <benchmark/benchmark.h>

#include "qkdopt/key_rate.hpp"
#include "qkdopt/model.hpp"
#include "qkdopt/optimizer.hpp"

using namespace qkdopt;

static void BM_SpdcState(benchmark::State& state) {
    const int trunc = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(spdc_state({0.2}, trunc));
}
BENCHMARK(BM_SpdcState)->Arg(3)->Arg(4)->Arg(5);

static void BM_RotateBasis(benchmark::State& state) {
    const auto s = spdc_state({0.2}, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rotate_basis(s, Party::Alice));
}
BENCHMARK(BM_RotateBasis)->Arg(3)->Arg(4);

static void BM_ComputeMetrics(benchmark::State& state) {
    const auto s = spdc_state({0.2}, static_cast<int>(state.range(0)));
    const LinkParams link{0.5, 0.5, 1e-4, 1e-4, 1e-9};
    for (auto _ : state) benchmark::DoNotOptimize(compute_metrics(s, link));
}
BENCHMARK(BM_ComputeMetrics)->Arg(3)->Arg(4);

static void BM_OptimalEpsilon(benchmark::State& state) {
    const LinkParams link{0.5, 0.5, 1e-4, 1e-4, 1e-9};
    OptimizeOptions opts;
    opts.check_convergence = false;
    for (auto _ : state) benchmark::DoNotOptimize(optimal_epsilon(link, 3, opts));
}
BENCHMARK(BM_OptimalEpsilon);

static void BM_ModelEval(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(eval_optimal_tf(0.7, 0.6, 1e-3, 1e-3));
}
BENCHMARK(BM_ModelEval);

BENCHMARK_MAIN();
