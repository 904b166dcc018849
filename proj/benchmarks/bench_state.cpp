#include <benchmark/benchmark.h>

#include "qcc/sparse_state.hpp"
#include "test_support.hpp"

using namespace qcc;

namespace {

SparseState grown_state(std::uint32_t n, std::size_t target) {
    qcc::testing::Rng rng(5);
    SparseState s = SparseState::reference(n, 0);
    while (s.size() < target)
        s = apply_generator_exponential(s, qcc::testing::random_generator(rng, n),
                                        qcc::testing::uniform(rng, -1.2, 1.2));
    return s;
}

void bm_apply_exponential(benchmark::State& state) {
    const std::uint32_t n = 24;
    const SparseState s = grown_state(n, static_cast<std::size_t>(state.range(0)));
    qcc::testing::Rng rng(6);
    const PauliWord t = qcc::testing::random_generator(rng, n);
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_generator_exponential(s, t, 0.3));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(s.size()));
}
BENCHMARK(bm_apply_exponential)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);

void bm_apply_with_cap(benchmark::State& state) {
    const std::uint32_t n = 24;
    const auto cap = static_cast<std::size_t>(state.range(0));
    const SparseState s = grown_state(n, cap);
    qcc::testing::Rng rng(6);
    const PauliWord t = qcc::testing::random_generator(rng, n);
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_generator_exponential(s, t, 0.3, cap));
}
BENCHMARK(bm_apply_with_cap)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);

void bm_truncate(benchmark::State& state) {
    const std::uint32_t n = 24;
    const SparseState s = grown_state(n, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(truncate(s, s.size() / 2));
}
BENCHMARK(bm_truncate)->Arg(1 << 14)->Arg(1 << 18);

}  // namespace

BENCHMARK_MAIN();
