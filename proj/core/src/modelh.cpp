#include "qinsch/modelh.hpp"

#include <cmath>
#include <stdexcept>

#include "qinsch/errors.hpp"
#include "qinsch/operators.hpp"

namespace qinsch {

PhysParams modelh_params(const PhysParams& p) {
    return PhysParams::from_alpha(0.0, p.nu, p.kappa, p.s, 0.0);
}

MixtureState to_mixture(const ModelHState& s) {
    MixtureState m(s.phi.grid);
    m.t = s.t;
    m.u = s.u;
    m.phi = s.phi;
    m.p0 = s.p;
    m.mu_bar = mean(s.mu);
    m.mu_p0 = s.mu;
    for (double& x : m.mu_p0.v) x -= m.mu_bar;
    return m;
}

ModelHState from_mixture(const MixtureState& s) {
    ModelHState h(s.phi.grid);
    h.t = s.t;
    h.u = s.u;
    h.phi = s.phi;
    h.p = s.p0;
    h.mu = s.mu_p0;
    for (double& x : h.mu.v) x += s.mu_bar;
    return h;
}

ModelHState step_modelh(const ModelHState& prev, double h, const PhysParams& p,
                        const PicardSettings& settings, StepDiagnostics* diag) {
    const PhysParams ph = modelh_params(p);
    auto [next, d] = step(to_mixture(prev), h, ph, settings);
    if (diag) *diag = d;
    return from_mixture(next);
}

ModelHRunResult run_modelh(const ModelHState& initial, const PhysParams& p,
                           const Schedule& schedule, const PicardSettings& settings,
                           const ModelHCallback& callback, bool keep_trajectory) {
    const PhysParams ph = modelh_params(p);
    ModelHRunResult result;
    StepCallback cb;
    if (callback) {
        cb = [&callback](const MixtureState& s, const StepDiagnostics& d) {
            callback(from_mixture(s), d);
        };
    }
    RunResult r = run(to_mixture(initial), ph, schedule, settings, {}, cb, keep_trajectory);
    result.diagnostics = std::move(r.diagnostics);
    if (keep_trajectory) {
        result.trajectory.reserve(r.trajectory.size());
        for (const auto& s : r.trajectory) result.trajectory.push_back(from_mixture(s));
    }
    return result;
}

ModelHState sanitize_modelh_state(const ModelHState& state, const PhysParams& p) {
    const PhysParams ph = modelh_params(p);
    ModelHState out(state.phi.grid);
    out.t = state.t;
    out.u = helmholtz(dealias(state.u)).solenoidal;
    out.phi = dealias(state.phi);
    out.p = dealias(state.p);
    const double pm = mean(out.p);
    for (double& x : out.p.v) x -= pm;
    out.mu = chemical_potential(out.phi, ph);
    return out;
}

RefinedReference refine_reference(const ModelHState& initial, const PhysParams& p,
                                  const Schedule& coarse_schedule, const PicardSettings& settings,
                                  int space_refine, int time_refine) {
    if (space_refine < 1 || time_refine < 1) {
        throw std::invalid_argument("refine_reference: refinement factors must be >= 1");
    }
    const TorusGrid& coarse = initial.phi.grid;
    std::array<int, 3> nf{coarse.n(0) * space_refine, coarse.n(1) * space_refine,
                          coarse.dim() == 3 ? coarse.n(2) * space_refine : 1};
    const TorusGrid fine(coarse.dim(), nf,
                         {coarse.length(0), coarse.length(1),
                          coarse.dim() == 3 ? coarse.length(2) : 1.0});

    ModelHState start(fine);
    start.t = initial.t;
    start.u = resample(initial.u, fine);
    start.phi = resample(initial.phi, fine);
    start.p = resample(initial.p, fine);
    start.mu = resample(initial.mu, fine);

    RefinedReference ref;
    ref.dt = coarse_schedule.dt;

    auto restrict_state = [&coarse](const ModelHState& s) {
        ModelHState r(coarse);
        r.t = s.t;
        r.u = resample(s.u, coarse);
        r.phi = resample(s.phi, coarse);
        r.p = resample(s.p, coarse);
        r.mu = resample(s.mu, coarse);
        return r;
    };
    ref.states.push_back(restrict_state(start));

    Schedule fine_schedule{coarse_schedule.dt / time_refine, coarse_schedule.t_end};
    int step_count = 0;
    run_modelh(
        start, p, fine_schedule, settings,
        [&](const ModelHState& s, const StepDiagnostics&) {
            ++step_count;
            if (step_count % time_refine == 0) ref.states.push_back(restrict_state(s));
        },
        /*keep_trajectory=*/false);
    return ref;
}

} // namespace qinsch
