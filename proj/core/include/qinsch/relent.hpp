#pragma once

#include <string>

#include "qinsch/modelh.hpp"

namespace qinsch {

/// Decomposition of the relative energy between a quasi-incompressible
/// (weak) slice and a model-H (strong) slice at the same time:
///   kinetic:    1/2 ∫ rho_alpha |u - u_alpha|^2
///   fractional: 1/2 ||Lambda^s (phi - phi_alpha)||^2
///   bregman:    ∫ Phi(phi_alpha) - Phi'(phi)(phi_alpha - phi) - Phi(phi)
struct RelEnergyReport {
    double t = 0.0;
    double kinetic = 0.0;
    double fractional = 0.0;
    double bregman = 0.0;
    double total = 0.0;
};

RelEnergyReport relative_energy(const MixtureState& weak, const ModelHState& strong,
                                const PhysParams& p);

/// Result of the incompressible-limit rate experiment.
struct RateReport {
    std::vector<double> alphas;          ///< strictly decreasing
    std::vector<double> sup_rel_energy;  ///< sup over output stamps per alpha
    std::vector<double> mu_gap;          ///< ∫ ||grad mu_p,alpha - grad mu||^2 dt
    std::vector<double> u_gap_h1;        ///< ||u_alpha - u||^2 in L^2(0,T;H^1)
    std::vector<double> hs_diag;         ///< ∫ ||phi_alpha||^2_{H^{s+1/2}} dt
    std::vector<double> phi_min;         ///< min phi over the run, per alpha
    std::vector<double> phi_max;         ///< max phi over the run, per alpha
    std::vector<double> halving_ratios;  ///< sup E(alpha_i)/sup E(alpha_{i+1})
    double fitted_slope = 0.0;           ///< log-log least squares slope
    double r_squared = 0.0;
    bool poor_fit = false;               ///< R^2 < 0.9
    bool well_prepared = true;
    bool aborted = false;                ///< a run failed; lists are partial
    std::string abort_reason;
};

/// Full setup of an alpha sweep; initial fields are shared across runs when
/// well_prepared (u0 is Leray-projected once so the model-H data coincide).
struct SweepSetup {
    VectorField u0;
    ScalarField phi0;
    PhysParams base;  ///< nu, kappa, s, delta taken from here
    std::vector<double> alphas;
    Schedule schedule;
    PicardSettings picard;
    bool well_prepared = true;
    int space_refine = 2;
    int time_refine = 4;
};

RateReport alpha_sweep(const SweepSetup& setup);

/// Time-integrated (trapezoid) squared H^{s+gamma/2} norm of phi along a
/// trajectory sampled at uniform spacing dt.
double hs_gamma_diagnostic(const std::vector<ScalarField>& phi_trajectory, double dt, double gamma,
                           const PhysParams& p);

struct PhiBoundReport {
    double min_phi = 0.0;
    double max_phi = 0.0;
    double theta = 0.5;
    bool pass = true;
};
PhiBoundReport phi_bound_check(const std::vector<ScalarField>& phi_trajectory, double theta = 0.5);

/// Least-squares slope of log(y) against log(x) plus the fit's R^2.
struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

} // namespace qinsch
