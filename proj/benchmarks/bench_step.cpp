#include <benchmark/benchmark.h>

#include "qinsch/init.hpp"
#include "qinsch/modelh.hpp"

using namespace qinsch;

namespace {

MixtureState spinodal_state(const TorusGrid& g, const PhysParams& p) {
    MixtureState s(g);
    s.phi = make_phi_preset("spinodal", g, 0.01, 1);
    s.u = make_u_preset("taylor-green(0.1)", g);
    return sanitize_state(s, p);
}

void BM_QuasiStep(benchmark::State& state) {
    const TorusGrid g = TorusGrid::square(2, static_cast<int>(state.range(0)));
    const PhysParams p = PhysParams::from_epsilon(-0.5, 2.0);
    const MixtureState s0 = spinodal_state(g, p);
    const PicardSettings set;
    for (auto _ : state) {
        auto [s1, diag] = step(s0, 1e-3, p, set);
        benchmark::DoNotOptimize(diag.picard_iters);
    }
}
BENCHMARK(BM_QuasiStep)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ModelHStep(benchmark::State& state) {
    const TorusGrid g = TorusGrid::square(2, static_cast<int>(state.range(0)));
    const PhysParams p = PhysParams::from_alpha(0.0, 2.0);
    MixtureState m = spinodal_state(g, p);
    ModelHState s0(g);
    s0.u = m.u;
    s0.phi = m.phi;
    s0.mu = chemical_potential(m.phi, p);
    s0 = sanitize_modelh_state(s0, p);
    const PicardSettings set;
    for (auto _ : state) {
        ModelHState s1 = step_modelh(s0, 1e-3, p, set);
        benchmark::DoNotOptimize(s1.t);
    }
}
BENCHMARK(BM_ModelHStep)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

} // namespace


