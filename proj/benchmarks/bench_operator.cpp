#include <benchmark/benchmark.h>

#include "qcc/sparse_state.hpp"
#include "test_support.hpp"

using namespace qcc;

namespace {

void bm_dress(benchmark::State& state) {
    qcc::testing::Rng rng(11);
    const std::uint32_t n = 20;
    const auto terms = static_cast<std::size_t>(state.range(0));
    const QubitOperator h = qcc::testing::random_real_operator(rng, n, terms);
    const PauliWord t = qcc::testing::random_generator(rng, n);
    for (auto _ : state)
        benchmark::DoNotOptimize(dress(h, t, 0.17));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(terms));
}
BENCHMARK(bm_dress)->Arg(1000)->Arg(10000)->Arg(100000);

void bm_expectation(benchmark::State& state) {
    qcc::testing::Rng rng(12);
    const std::uint32_t n = 16;
    const QubitOperator h = qcc::testing::random_real_operator(rng, n, 200);
    SparseState s = SparseState::reference(n, 0);
    while (s.size() < static_cast<std::size_t>(state.range(0)))
        s = apply_generator_exponential(s, qcc::testing::random_generator(rng, n),
                                        qcc::testing::uniform(rng, -1.2, 1.2));
    for (auto _ : state)
        benchmark::DoNotOptimize(expectation(h, s));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(s.size()));
}
BENCHMARK(bm_expectation)->Arg(1 << 8)->Arg(1 << 12)->Arg(1 << 16);

void bm_compress(benchmark::State& state) {
    qcc::testing::Rng rng(13);
    const QubitOperator h = qcc::testing::random_real_operator(rng, 20, 50000);
    for (auto _ : state)
        benchmark::DoNotOptimize(compress(h, 0.5));
}
BENCHMARK(bm_compress);

}  // namespace

BENCHMARK_MAIN();
