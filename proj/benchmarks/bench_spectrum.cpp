#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hyperspec/hyperrect_spectrum.hpp"
#include "hyperspec/linalg.hpp"

using namespace hyperspec;

namespace {

std::vector<double> sides(unsigned d) {
    std::mt19937_64 rng(d);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::vector<double> a(d);
    for (auto& x : a) x = u(rng);
    return a;
}

const FunctionSpec kLaplace = FunctionSpec::exp_mixture({1.0}, {1.0});

}  // namespace

static void BM_SpectrumFwht(benchmark::State& state) {
    const Hyperrectangle r(sides(static_cast<unsigned>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(spectrum(r, kLaplace));
}
BENCHMARK(BM_SpectrumFwht)->DenseRange(4, 20, 4);

static void BM_SpectrumSubsetSums(benchmark::State& state) {
    const Hyperrectangle r(sides(static_cast<unsigned>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(spectrum_by_subset_sums(r, kLaplace));
}
BENCHMARK(BM_SpectrumSubsetSums)->DenseRange(2, 10, 2);

// Jacobi on the full 2^d x 2^d distance matrix.
static void BM_SpectrumDense(benchmark::State& state) {
    const Hyperrectangle r(sides(static_cast<unsigned>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(dense_spectrum(r, kLaplace));
}
BENCHMARK(BM_SpectrumDense)->DenseRange(2, 7)->Unit(benchmark::kMillisecond);

static void BM_NumericRank(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(numeric_rank(m));
}
BENCHMARK(BM_NumericRank)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
