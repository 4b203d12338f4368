#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qinsch/physics.hpp"

namespace qinsch {

/// One time slice of the quasi-incompressible system. p0 and mu_p0 are
/// mean-zero; mu_bar is the mean chemical potential recovered separately.
struct MixtureState {
    double t = 0.0;
    VectorField u;
    ScalarField phi;
    ScalarField p0;
    ScalarField mu_p0;
    double mu_bar = 0.0;

    MixtureState() = default;
    explicit MixtureState(const TorusGrid& g)
        : u(g), phi(g), p0(g), mu_p0(g) {}
};

struct PicardSettings {
    double tol = 1e-10;      ///< relative-update stopping threshold
    int max_iter = 200;
    double dt_backoff = 0.5; ///< dt multiplier after a failed solve
    int max_backoffs = 10;
};

struct StepDiagnostics {
    int picard_iters = 0;
    double residual = 0.0;            ///< final relative update
    double constraint_residual = 0.0; ///< ||div u + delta p0 - alpha Lap mu_p0||
    double energy_before = 0.0;
    double energy_after = 0.0;
    EnergyReport energy_report;       ///< breakdown of the post-step energy
    DissipationReport dissipation;    ///< viscous part carries eta(phi_k)
    double energy_defect = 0.0;       ///< E_new + jump + h*D - E_old (<= 0 up to round-off)
    double kinetic_jump = 0.0;        ///< ∫ rho_k |u-u_k|^2 / 2
    double dt = 0.0;                  ///< accepted step size
    long eta_clamped = 0;
};

/// Spatial means frozen at the previous level; they define the
/// constant-coefficient per-mode operator of the Picard splitting.
struct FrozenCoeffs {
    double rho_bar = 1.0;       ///< mean rho(phi_k)
    double eta_bar = 1.0;       ///< mean eta(phi_k)
    double pressure_coef = 1.0; ///< mean zeta*rho = 1 - alpha*mean(phi_k)
};
FrozenCoeffs freeze_coeffs(const ScalarField& phi_k, const PhysParams& p);

/// Right-hand-side / solution container of the per-mode linear solve.
struct StackedFields {
    VectorField u;
    ScalarField p0;
    ScalarField phi;
    ScalarField mu_p0;

    StackedFields() = default;
    explicit StackedFields(const TorusGrid& g) : u(g), p0(g), phi(g), mu_p0(g) {}
};

/// Solves the constant-coefficient block system per Fourier mode:
/// momentum with mass rho_bar/h and mean-viscosity Stokes operator coupled to
/// p0 through div u + delta p0 = alpha Lap mu_p0 (that row has zero RHS), and
/// the convex-split Cahn-Hilliard block. Inputs are dealiased first.
StackedFields apply_Lk_inverse(const StackedFields& rhs, const FrozenCoeffs& frozen, double h,
                               const PhysParams& p);

/// Optional forcing added to the phi equation, evaluated at the new time.
using PhiForcing = std::function<ScalarField(const TorusGrid&, double)>;

/// One implicit step of Eqs. (momentum, continuity, phi, potential) by Picard
/// iteration on the per-mode splitting. Throws PicardDivergedError when the
/// iteration fails to reach settings.tol.
std::pair<MixtureState, StepDiagnostics> step(const MixtureState& prev, double h,
                                              const PhysParams& p, const PicardSettings& settings,
                                              const PhiForcing& forcing = {});

/// L2 norm of div u + delta p0 - alpha Lap mu_p0.
double constraint_residual(const MixtureState& state, const PhysParams& p);

/// p1 = zeta p0 + d/dt G(u) at the middle state of a uniform three-state
/// window, with the time derivative by centered difference.
ScalarField reconstruct_p1(const MixtureState& s0, const MixtureState& s1, const MixtureState& s2,
                           const PhysParams& p);

struct Schedule {
    double dt = 1e-3;
    double t_end = 0.1;
};

using StepCallback = std::function<void(const MixtureState&, const StepDiagnostics&)>;

struct RunResult {
    std::vector<MixtureState> trajectory;  ///< includes the initial state
    std::vector<StepDiagnostics> diagnostics;
};

/// March from `initial` to t_end. On Picard failure the step is retried at
/// dt*dt_backoff (up to max_backoffs, then SolverError); after an accepted
/// step the attempt dt returns to the schedule value.
RunResult run(const MixtureState& initial, const PhysParams& p, const Schedule& schedule,
              const PicardSettings& settings, const PhiForcing& forcing = {},
              const StepCallback& callback = {}, bool keep_trajectory = true);

/// Projects a state into the solver's invariant set: fields dealiased,
/// p0/mu_p0 mean-free, mu_bar consistent with phi.
MixtureState sanitize_state(const MixtureState& state, const PhysParams& p);

} // namespace qinsch
