#include <benchmark/benchmark.h>

#include "pwsharp/oracles.hpp"
#include "pwsharp/sharpsolve.hpp"
#include "pwsharp/specialfn.hpp"

using namespace pwsharp;

static void BM_EvalA_Series(benchmark::State& state) {
    SpaceOrder o(0.3);
    for (auto _ : state) benchmark::DoNotOptimize(eval_A(o, Complex(7.5, 1.0)));
}
BENCHMARK(BM_EvalA_Series);

static void BM_EvalA_Asymptotic(benchmark::State& state) {
    SpaceOrder o(0.3);
    for (auto _ : state) benchmark::DoNotOptimize(eval_A(o, Complex(60.0, 1.0)));
}
BENCHMARK(BM_EvalA_Asymptotic);

// Zeros are memoized per order, so after the first pass this measures the lookup.
static void BM_BesselZero(benchmark::State& state) {
    SpaceOrder o(1.0);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bessel_zero(o, n));
}
BENCHMARK(BM_BesselZero)->Arg(1)->Arg(50)->Arg(400);

// k = 4 solves through the determinant, k = 8 through the secular equation.
static void BM_SolveLambda0(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        SharpProblem p(homogeneous_space(SpaceOrder(0.0)), k);
        benchmark::DoNotOptimize(solve_lambda0(p).lambda0);
    }
}
BENCHMARK(BM_SolveLambda0)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Galerkin(benchmark::State& state) {
    SharpProblem p(homogeneous_space(SpaceOrder(0.0)), 4);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(galerkin_value(p, {n}).value);
}
BENCHMARK(BM_Galerkin)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
