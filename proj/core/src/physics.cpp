#include "qinsch/physics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qinsch/operators.hpp"

namespace qinsch {

namespace {
void validate_common(double nu, double kappa, double s, double delta) {
    if (!(nu > 0.0)) throw std::invalid_argument("PhysParams: nu must be positive");
    if (!(kappa > 0.0)) throw std::invalid_argument("PhysParams: kappa must be positive");
    if (!(s >= 1.0) || !std::isfinite(s)) {
        throw std::invalid_argument("PhysParams: fractional order s must be >= 1");
    }
    if (!(delta >= 0.0)) throw std::invalid_argument("PhysParams: delta must be >= 0");
}
} // namespace

PhysParams PhysParams::from_epsilon(double epsilon, double nu, double kappa, double s,
                                    double delta) {
    if (!(epsilon > -1.0) || !(epsilon <= 0.0)) {
        throw std::invalid_argument("PhysParams: epsilon must lie in (-1, 0], got " +
                                    std::to_string(epsilon));
    }
    validate_common(nu, kappa, s, delta);
    PhysParams p;
    p.epsilon = epsilon;
    p.alpha = -epsilon / (2.0 + epsilon);
    p.zeta = 1.0 + p.alpha;
    p.nu = nu;
    p.kappa = kappa;
    p.s = s;
    p.delta = delta;
    return p;
}

PhysParams PhysParams::from_alpha(double alpha, double nu, double kappa, double s, double delta) {
    if (!(alpha >= 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument("PhysParams: alpha must lie in [0, 1), got " +
                                    std::to_string(alpha));
    }
    validate_common(nu, kappa, s, delta);
    PhysParams p;
    p.alpha = alpha;
    p.epsilon = -2.0 * alpha / (1.0 + alpha);
    p.zeta = 1.0 + alpha;
    p.nu = nu;
    p.kappa = kappa;
    p.s = s;
    p.delta = delta;
    return p;
}

ScalarField density(const ScalarField& phi, const PhysParams& p, bool* nonpositive) {
    ScalarField rho(phi.grid);
    const double half_eps = 0.5 * p.epsilon;
    double rho_min = 1.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        rho.v[i] = half_eps * phi.v[i] + half_eps + 1.0;
        rho_min = std::min(rho_min, rho.v[i]);
    }
    if (nonpositive) *nonpositive = (rho_min <= 0.0);
    return rho;
}

ScalarField zeta_density(const ScalarField& phi, const PhysParams& p) {
    ScalarField zr(phi.grid);
    for (std::size_t i = 0; i < phi.size(); ++i) zr.v[i] = 1.0 - p.alpha * phi.v[i];
    return zr;
}

ScalarField viscosity(const ScalarField& phi, const PhysParams& p, long* clamp_count) {
    ScalarField eta(phi.grid);
    const double a = 0.5 * (p.nu - 1.0);
    const double b = 0.5 * (p.nu + 1.0);
    long clamped = 0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        double e = a * phi.v[i] + b;
        if (e < kEtaMin) {
            e = kEtaMin;
            ++clamped;
        }
        eta.v[i] = e;
    }
    if (clamp_count) *clamp_count += clamped;
    return eta;
}

SymTensorField newtonian_stress(const ScalarField& eta, const SymTensorField& sym_grad_u,
                                const ScalarField& div_u) {
    const TorusGrid& g = eta.grid;
    const int d = g.dim();
    SymTensorField s(g);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            ScalarField& sij = s.at(i, j);
            const ScalarField& dij = sym_grad_u.at(i, j);
            if (i == j) {
                for (std::size_t m = 0; m < sij.size(); ++m) {
                    sij.v[m] = eta.v[m] * (2.0 * dij.v[m] - (2.0 / 3.0) * div_u.v[m]);
                }
            } else {
                for (std::size_t m = 0; m < sij.size(); ++m) {
                    sij.v[m] = 2.0 * eta.v[m] * dij.v[m];
                }
            }
        }
    }
    return s;
}

ScalarField chemical_potential(const ScalarField& phi, const PhysParams& p) {
    ScalarField mu = dealiased_cube(phi);
    axpy(mu, -p.kappa, phi);
    mu += frac_laplacian(phi, p.s);
    return mu;
}

double mean_chemical_potential(const ScalarField& phi, const PhysParams& p) {
    const Potential pot{p.kappa};
    double s = 0.0;
    for (double x : phi.v) s += pot.dF(x);
    return s / static_cast<double>(phi.size());
}

EnergyReport total_energy(const VectorField& u, const ScalarField& phi, const PhysParams& p) {
    const Potential pot{p.kappa};
    EnergyReport r;

    const ScalarField rho = density(phi, p);
    double kin = 0.0, pot_sum = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        double usq = 0.0;
        for (int a = 0; a < u.dim(); ++a) usq += u[a].v[i] * u[a].v[i];
        kin += 0.5 * rho.v[i] * usq;
        pot_sum += pot.F(phi.v[i]);
    }
    const double dv = phi.grid.cell_volume();
    r.kinetic = kin * dv;
    r.potential = pot_sum * dv;

    // 1/2 ||Lambda^s phi||^2 by Parseval.
    const SpectralField phat = forward_fft(phi);
    const TorusGrid& g = phi.grid;
    double frac = 0.0;
    for (std::size_t i = 0; i < phat.size(); ++i) {
        const auto idx = g.spectral_index(i);
        double m = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double k = g.wavenumber(a, idx[a]);
            m += k * k;
        }
        if (m == 0.0) continue;
        frac += g.mode_weight(idx[g.dim() - 1]) * std::pow(m, p.s) * std::norm(phat.c[i]);
    }
    r.fractional = 0.5 * frac * g.volume();
    r.total = r.kinetic + r.potential + r.fractional;
    return r;
}

DissipationReport dissipation(const VectorField& u, const ScalarField& phi_for_eta,
                              const ScalarField& mu_p0, const ScalarField& p0,
                              const PhysParams& p) {
    DissipationReport r;
    const TorusGrid& g = u.grid;
    const int d = g.dim();

    const ScalarField eta = viscosity(phi_for_eta, p);
    const SymTensorField du = sym_gradient(u);
    const ScalarField divu = divergence(u);
    double visc = 0.0;
    for (std::size_t m = 0; m < eta.size(); ++m) {
        double dd = 0.0;  // Du:Du
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                const double x = du.at(i, j).v[m];
                dd += (i == j ? 1.0 : 2.0) * x * x;
            }
        }
        visc += eta.v[m] * (2.0 * dd - (2.0 / 3.0) * divu.v[m] * divu.v[m]);
    }
    r.viscous = visc * g.cell_volume();

    const VectorField grad_mu = gradient(mu_p0);
    const double gm = l2_norm(grad_mu);
    r.chemical = gm * gm;

    const double pn = l2_norm(p0);
    r.pressure = p.delta * pn * pn;
    return r;
}

} // namespace qinsch
