#include <benchmark/benchmark.h>

#include "qcc/sympoly.hpp"
#include "test_support.hpp"

using namespace qcc;

namespace {

struct Fixture {
    QubitOperator h;
    GeneratorPool pool;

    static Fixture make(std::uint32_t n, std::size_t m, std::size_t terms) {
        qcc::testing::Rng rng(42);
        auto [h, pool] = qcc::testing::random_instance(rng, n, terms, m, BasisState(n));
        return {std::move(h), std::move(pool)};
    }
};

void bm_compile(benchmark::State& state) {
    const auto order = static_cast<std::uint32_t>(state.range(0));
    const Fixture f = Fixture::make(10, 16, 60);
    for (auto _ : state) {
        benchmark::DoNotOptimize(CompiledAnsatz::compile(f.h, f.pool, order));
    }
    state.SetLabel(std::to_string(count_terms(16, order)) + " terms");
}
BENCHMARK(bm_compile)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

void bm_evaluate(benchmark::State& state) {
    const auto order = static_cast<std::uint32_t>(state.range(0));
    const Fixture f = Fixture::make(10, 16, 60);
    const CompiledAnsatz ansatz = CompiledAnsatz::compile(f.h, f.pool, order);
    qcc::testing::Rng rng(7);
    const auto t = qcc::testing::random_amplitudes(rng, 16, 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(ansatz.evaluate(t).energy);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(ansatz.term_count()));
}
BENCHMARK(bm_evaluate)->Arg(2)->Arg(3)->Arg(4);

void bm_gradient(benchmark::State& state) {
    const auto order = static_cast<std::uint32_t>(state.range(0));
    const Fixture f = Fixture::make(10, 16, 60);
    const CompiledAnsatz ansatz = CompiledAnsatz::compile(f.h, f.pool, order);
    qcc::testing::Rng rng(7);
    const auto t = qcc::testing::random_amplitudes(rng, 16, 0.5);
    std::vector<double> grad(16);
    for (auto _ : state)
        benchmark::DoNotOptimize(ansatz.evaluate(t, grad).energy);
}
BENCHMARK(bm_gradient)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
