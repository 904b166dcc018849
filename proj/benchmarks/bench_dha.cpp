#include <benchmark/benchmark.h>

#include "qcc/generators.hpp"
#include "test_support.hpp"

using namespace qcc;

namespace {

GeneratorPool arrowhead(std::size_t m) {
    qcc::testing::Rng rng(21);
    GeneratorPool pool{.generators = {},
                       .grads = {},
                       .diag_energies = {},
                       .rankings = {},
                       .reference = BasisState(1),
                       .e0 = 0.0,
                       .ranked = false};
    pool.generators.assign(m, PauliWord::single('Y', 0, 1));
    pool.grads.resize(m);
    pool.diag_energies.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        pool.grads[k] = qcc::testing::uniform(rng, -0.5, 0.5);
        pool.diag_energies[k] = qcc::testing::uniform(rng, -2.0, -0.5);
    }
    return pool;
}

void bm_dha_solve(benchmark::State& state) {
    const GeneratorPool pool = arrowhead(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(dha_solve(pool, 1e-12));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            state.range(0));
}
BENCHMARK(bm_dha_solve)->Arg(1000)->Arg(100000)->Arg(1000000);

}  // namespace

BENCHMARK_MAIN();
