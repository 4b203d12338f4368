#include <benchmark/benchmark.h>

#include "qinsch/init.hpp"
#include "qinsch/operators.hpp"

using namespace qinsch;

namespace {

ScalarField random_field(const TorusGrid& g, std::uint64_t seed) {
    DeterministicRng rng(seed);
    ScalarField f(g);
    for (double& x : f.v) x = rng.symmetric();
    return dealias(f);
}

void BM_FftRoundTrip(benchmark::State& state) {
    const TorusGrid g = TorusGrid::square(2, static_cast<int>(state.range(0)));
    const ScalarField f = random_field(g, 1);
    for (auto _ : state) {
        ScalarField back = inverse_fft(forward_fft(f));
        benchmark::DoNotOptimize(back.v.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.point_count()));
}
BENCHMARK(BM_FftRoundTrip)->Arg(64)->Arg(128)->Arg(256);

void BM_FracLaplacian(benchmark::State& state) {
    const TorusGrid g = TorusGrid::square(2, static_cast<int>(state.range(0)));
    const ScalarField f = random_field(g, 2);
    for (auto _ : state) {
        ScalarField out = frac_laplacian(f, 1.6);
        benchmark::DoNotOptimize(out.v.data());
    }
}
BENCHMARK(BM_FracLaplacian)->Arg(64)->Arg(128);

void BM_Helmholtz(benchmark::State& state) {
    const TorusGrid g = TorusGrid::square(2, static_cast<int>(state.range(0)));
    VectorField u(g);
    u[0] = random_field(g, 3);
    u[1] = random_field(g, 4);
    for (auto _ : state) {
        auto h = helmholtz(u);
        benchmark::DoNotOptimize(h.potential.v.data());
    }
}
BENCHMARK(BM_Helmholtz)->Arg(64)->Arg(128);

void BM_DealiasedCube(benchmark::State& state) {
    const TorusGrid g = TorusGrid::square(2, static_cast<int>(state.range(0)));
    const ScalarField f = random_field(g, 5);
    for (auto _ : state) {
        ScalarField out = dealiased_cube(f);
        benchmark::DoNotOptimize(out.v.data());
    }
}
BENCHMARK(BM_DealiasedCube)->Arg(64)->Arg(128);

} // namespace

BENCHMARK_MAIN();
