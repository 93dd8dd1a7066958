#include <benchmark/benchmark.h>

#include "prw/dual.hpp"
#include "prw/homogeneous.hpp"
#include "prw/rng.hpp"
#include "prw/spectral.hpp"

using namespace prw;

namespace {

TransitionMatrix sinkhorn_matrix(std::uint64_t seed) {
    CounterStream rng(seed);
    std::array<double, 16> e{};
    for (auto& v : e) v = 0.05 + rng.next_uniform();
    for (int it = 0; it < 100; ++it) {
        for (int i = 0; i < 4; ++i) {
            double s = e[i * 4] + e[i * 4 + 1] + e[i * 4 + 2] + e[i * 4 + 3];
            for (int j = 0; j < 4; ++j) e[i * 4 + j] /= s;
        }
        for (int j = 0; j < 4; ++j) {
            double s = e[j] + e[4 + j] + e[8 + j] + e[12 + j];
            for (int i = 0; i < 4; ++i) e[i * 4 + j] /= s;
        }
    }
    return TransitionMatrix::from_entries(e);
}

} // namespace

static void BM_DeviationNorm(benchmark::State& state) {
    auto q = sinkhorn_matrix(9);
    for (auto _ : state) benchmark::DoNotOptimize(deviation_norm(q));
}
BENCHMARK(BM_DeviationNorm);

static void BM_StationaryVector(benchmark::State& state) {
    auto q = sinkhorn_matrix(10);
    for (auto _ : state) benchmark::DoNotOptimize(stationary_vector(q));
}
BENCHMARK(BM_StationaryVector);

static void BM_IsPrimitive(benchmark::State& state) {
    auto q = sinkhorn_matrix(11);
    for (auto _ : state) benchmark::DoNotOptimize(is_primitive(q));
}
BENCHMARK(BM_IsPrimitive);

static void BM_ClassifyHomogeneous(benchmark::State& state) {
    auto q = sinkhorn_matrix(12);
    for (auto _ : state) benchmark::DoNotOptimize(classify_homogeneous(q).classification);
}
BENCHMARK(BM_ClassifyHomogeneous);

static void BM_SolveEmbedding(benchmark::State& state) {
    for (auto _ : state) {
        auto table = EmbeddingTable::solve();
        benchmark::DoNotOptimize(table.base(Parity::Odd, Direction::S));
    }
}
BENCHMARK(BM_SolveEmbedding)->Unit(benchmark::kMicrosecond);

static void BM_ValidateEmbedding(benchmark::State& state) {
    auto table = EmbeddingTable::solve();
    auto env = leftright_env(99, 0.25);
    Box box = Box::centered(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(validate_embedding(table, env, box).size());
}
BENCHMARK(BM_ValidateEmbedding)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
