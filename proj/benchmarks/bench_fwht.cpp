#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hyperspec/walsh_hadamard.hpp"

static void BM_FwhtInplace(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(1) << state.range(0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    for (auto _ : state) {
        hyperspec::fwht_inplace(v);
        benchmark::DoNotOptimize(v.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_FwhtInplace)->DenseRange(4, 20, 4);

BENCHMARK_MAIN();
