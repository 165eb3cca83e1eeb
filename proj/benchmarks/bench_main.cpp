#include "fracback/experiments.hpp"
#include "fracback/solver.hpp"
#include "fracback/special_fn.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace fracback;

// Arguments are -x scaled by 1e-3 so that each range hits one evaluation route.
static void BM_MittagLeffler(benchmark::State& state) {
    const double alpha = 0.6;
    const double x = -static_cast<double>(state.range(0)) * 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mittag_leffler(alpha, 1.0, x));
    }
}
BENCHMARK(BM_MittagLeffler)->Arg(500)->Arg(5000)->Arg(100000000);

static void BM_MittagLefflerBeta(benchmark::State& state) {
    const double x = -static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mittag_leffler(0.6, 0.6, x));
        benchmark::DoNotOptimize(mittag_leffler(0.6, 1.6, x));
    }
}
BENCHMARK(BM_MittagLefflerBeta)->Arg(1)->Arg(30)->Arg(1800);

static void BM_MemoryKernel(benchmark::State& state) {
    ExperimentConfig cfg;
    const TimeFractionalProblem p = paper_template(cfg, 0.8);
    for (auto _ : state) {
        MemoryKernel k(p, 1e-5);
        benchmark::DoNotOptimize(k.apply(p.source.get()));
    }
}
BENCHMARK(BM_MemoryKernel)->Unit(benchmark::kMillisecond);

static void BM_Table1SingleAlpha(benchmark::State& state) {
    ExperimentConfig cfg;
    cfg.alphas = {0.8};
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_table1(cfg));
    }
}
BENCHMARK(BM_Table1SingleAlpha)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK_MAIN();
