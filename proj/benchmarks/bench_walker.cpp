#include <benchmark/benchmark.h>

#include "prw/estimators.hpp"
#include "prw/rng.hpp"
#include "prw/walker.hpp"

using namespace prw;

namespace {

void step_throughput(benchmark::State& state, const Environment& env) {
    StepSampler sampler(env);
    WalkerState s{{0, 0}, Direction::N};
    std::uint64_t k = 0;
    for (auto _ : state) {
        s = sampler.advance(s, counter_uniform(42, k++));
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations());
}

} // namespace

static void BM_StepHomogeneous(benchmark::State& state) {
    step_throughput(state, homogeneous_env(TransitionMatrix::standard_walk()));
}
BENCHMARK(BM_StepHomogeneous);

static void BM_StepFlr(benchmark::State& state) {
    step_throughput(state, flr_env(7, 0.1));
}
BENCHMARK(BM_StepFlr);

static void BM_StepLeftRight(benchmark::State& state) {
    step_throughput(state, leftright_env(7, 0.2));
}
BENCHMARK(BM_StepLeftRight);

static void BM_StepBackward(benchmark::State& state) {
    step_throughput(state, backward_inhom_env(7, ZetaLaw::uniform(0.2, 0.8), true));
}
BENCHMARK(BM_StepBackward);

static void BM_Simulate(benchmark::State& state) {
    auto env = homogeneous_env(TransitionMatrix::standard_walk());
    WalkerState xi{{0, 0}, Direction::E};
    const auto n = static_cast<std::uint64_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto t = simulate(env, xi, n, ++seed);
        benchmark::DoNotOptimize(t.steps.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1 << 10)->Arg(1 << 14);

static void BM_ExactDistribution(benchmark::State& state) {
    auto env = flr_env(7, 0.1);
    WalkerState xi{{0, 0}, Direction::N};
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto dist = exact_distribution(env, xi, n);
        benchmark::DoNotOptimize(dist.size());
    }
}
BENCHMARK(BM_ExactDistribution)->Arg(8)->Arg(16)->Arg(24);

static void BM_EnsembleRun(benchmark::State& state) {
    auto env = homogeneous_env(TransitionMatrix::standard_walk());
    WalkerState xi{{0, 0}, Direction::E};
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        auto acc = run_ensemble(env, xi, 4096, 512, 42, threads);
        benchmark::DoNotOptimize(acc.checkpoints.back().sum_xx);
    }
    state.SetItemsProcessed(state.iterations() * 4096 * 512);
}
BENCHMARK(BM_EnsembleRun)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
