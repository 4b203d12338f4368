#pragma once

#include "qinsch/stepper.hpp"

namespace qinsch {

/// One time slice of incompressible model H: div u = 0, p mean-zero, and
/// mu = F'(phi) + Lambda^{2s} phi the full chemical potential.
struct ModelHState {
    double t = 0.0;
    VectorField u;
    ScalarField phi;
    ScalarField p;
    ScalarField mu;

    ModelHState() = default;
    explicit ModelHState(const TorusGrid& g) : u(g), phi(g), p(g), mu(g) {}
};

/// Model-H parameters are the matched-density, unregularized specialization;
/// alpha and delta of `p` are ignored.
PhysParams modelh_params(const PhysParams& p);

/// Backward-Euler step with Leray projection, realized as the alpha = 0,
/// delta = 0 case of the quasi-incompressible kernel so that the reduction
/// to model H is exact by construction (same splitting, same dealiasing).
ModelHState step_modelh(const ModelHState& prev, double h, const PhysParams& p,
                        const PicardSettings& settings, StepDiagnostics* diag = nullptr);

using ModelHCallback = std::function<void(const ModelHState&, const StepDiagnostics&)>;

struct ModelHRunResult {
    std::vector<ModelHState> trajectory;
    std::vector<StepDiagnostics> diagnostics;
};

ModelHRunResult run_modelh(const ModelHState& initial, const PhysParams& p,
                           const Schedule& schedule, const PicardSettings& settings,
                           const ModelHCallback& callback = {}, bool keep_trajectory = true);

/// Leray-project u, dealias, zero pressure mean, recompute mu from phi.
ModelHState sanitize_modelh_state(const ModelHState& state, const PhysParams& p);

// Conversions between the model-H slice and the kernel's state layout.
MixtureState to_mixture(const ModelHState& s);
ModelHState from_mixture(const MixtureState& s);

/// Reference trajectory for the relative-energy harness: the same initial
/// data run at `space_refine` x the resolution and dt / `time_refine`,
/// resampled back onto the coarse grid at every coarse output stamp
/// (including t = 0, where the resampling returns the data unchanged).
struct RefinedReference {
    std::vector<ModelHState> states;  ///< on the coarse grid, one per coarse stamp
    double dt = 0.0;                  ///< coarse stamp spacing
};
RefinedReference refine_reference(const ModelHState& initial, const PhysParams& p,
                                  const Schedule& coarse_schedule, const PicardSettings& settings,
                                  int space_refine = 2, int time_refine = 4);

} // namespace qinsch
