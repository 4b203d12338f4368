#pragma once

#include "qinsch/field.hpp"

namespace qinsch {

/// Physical parameters of the mixture. alpha and zeta are derived from
/// epsilon (or epsilon from alpha) and never set independently:
///   alpha = -epsilon/(2+epsilon),  zeta = 2/(2+epsilon) = 1+alpha.
/// epsilon = 0 is the matched-density case (alpha = 0).
struct PhysParams {
    double epsilon = -0.5;  ///< relative density difference, (-1, 0]
    double alpha = 1.0 / 3.0;
    double zeta = 4.0 / 3.0;
    double nu = 1.0;     ///< viscosity ratio, > 0
    double kappa = 1.0;  ///< concave-part coefficient, > 0
    double s = 1.6;      ///< fractional order, >= 1
    double delta = 1e-6; ///< pressure regularization, >= 0

    static PhysParams from_epsilon(double epsilon, double nu = 1.0, double kappa = 1.0,
                                   double s = 1.6, double delta = 1e-6);
    static PhysParams from_alpha(double alpha, double nu = 1.0, double kappa = 1.0,
                                 double s = 1.6, double delta = 1e-6);

    bool matched_density() const { return alpha == 0.0; }
    /// s below the analysis range s > 3/2 (allowed, flagged).
    bool s_below_analysis_range() const { return s < 1.5; }

    /// epsilon*delta/(2*alpha) in the closed form -delta/(1+alpha); regular at alpha=0.
    double mass_source_coef() const { return -delta / (1.0 + alpha); }
    /// epsilon*delta/(4*alpha) in the closed form -delta/(2(1+alpha)).
    double pressure_drag_coef() const { return -delta / (2.0 * (1.0 + alpha)); }
};

/// Convex/concave split of the double-well free energy:
///   Phi(x) = x^4/4 + 1/4 (convex),  F(x) = Phi(x) - (kappa/2) x^2.
/// With kappa = 1, F(x) = (x^2-1)^2/4, F(+-1) = 0, F >= 0.
struct Potential {
    double kappa = 1.0;
    double Phi(double x) const { return 0.25 * x * x * x * x + 0.25; }
    double dPhi(double x) const { return x * x * x; }
    double F(double x) const { return Phi(x) - 0.5 * kappa * x * x; }
    double dF(double x) const { return x * x * x - kappa * x; }
};

/// rho(phi) = (eps/2) phi + eps/2 + 1. Sets *nonpositive (when given) if
/// min rho <= 0, signalling phi far outside the physical range.
ScalarField density(const ScalarField& phi, const PhysParams& p, bool* nonpositive = nullptr);

/// zeta * rho(phi) via the identity zeta*rho = 1 - alpha*phi.
ScalarField zeta_density(const ScalarField& phi, const PhysParams& p);

constexpr double kEtaMin = 1e-6;

/// eta(phi) = (nu-1)/2 phi + (nu+1)/2, clamped below at kEtaMin;
/// *clamp_count (when given) is incremented per clamped sample.
ScalarField viscosity(const ScalarField& phi, const PhysParams& p, long* clamp_count = nullptr);

/// Newtonian stress S = 2 eta Du - (2/3) eta (div u) I; the 2/3 coefficient
/// is used in every dimension.
SymTensorField newtonian_stress(const ScalarField& eta, const SymTensorField& sym_grad_u,
                                const ScalarField& div_u);

/// mu = F'(phi) + Lambda^{2s} phi with the cubic evaluated alias-free.
ScalarField chemical_potential(const ScalarField& phi, const PhysParams& p);

/// Spatial mean of F'(phi) (the mean chemical potential).
double mean_chemical_potential(const ScalarField& phi, const PhysParams& p);

struct EnergyReport {
    double kinetic = 0.0;     ///< 1/2 ∫ rho |u|^2
    double potential = 0.0;   ///< ∫ F(phi)
    double fractional = 0.0;  ///< 1/2 ||Lambda^s phi||^2
    double total = 0.0;
};
EnergyReport total_energy(const VectorField& u, const ScalarField& phi, const PhysParams& p);

struct DissipationReport {
    double viscous = 0.0;   ///< ∫ 2 eta Du:Du - (2/3) eta (div u)^2
    double chemical = 0.0;  ///< ||grad mu_p0||^2
    double pressure = 0.0;  ///< delta ||p0||^2
    double total() const { return viscous + chemical + pressure; }
};

/// Dissipation with the viscosity carried by phi_for_eta: the stepper's
/// energy budget freezes eta at the previous level, continuum diagnostics
/// pass the state's own phi.
DissipationReport dissipation(const VectorField& u, const ScalarField& phi_for_eta,
                              const ScalarField& mu_p0, const ScalarField& p0,
                              const PhysParams& p);

} // namespace qinsch
