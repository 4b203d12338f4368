#include "qinsch/stepper.hpp"

#include <cmath>
#include <string>

#include "qinsch/errors.hpp"
#include "qinsch/operators.hpp"

namespace qinsch {

namespace {

struct SpectralStack {
    std::vector<SpectralField> u;
    SpectralField p0;
    SpectralField phi;
    SpectralField mu;

    explicit SpectralStack(const TorusGrid& g)
        : u(g.dim(), SpectralField(g)), p0(g), phi(g), mu(g) {}
};

// Wavenumber with the derivative convention (Nyquist zeroed).
double k_deriv(const TorusGrid& g, int axis, int index) {
    if (2 * g.freq(axis, index) == g.n(axis)) return 0.0;
    return g.wavenumber(axis, index);
}

double parseval_sq(const SpectralField& f) {
    const TorusGrid& g = f.grid;
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto idx = g.spectral_index(i);
        acc += g.mode_weight(idx[g.dim() - 1]) * std::norm(f.c[i]);
    }
    return acc * g.volume();
}

double stack_norm_sq(const SpectralStack& s) {
    double acc = parseval_sq(s.p0) + parseval_sq(s.phi) + parseval_sq(s.mu);
    for (const auto& c : s.u) acc += parseval_sq(c);
    return acc;
}

double stack_diff_norm_sq(const SpectralStack& a, const SpectralStack& b) {
    auto d2 = [](const SpectralField& x, const SpectralField& y) {
        SpectralField d = x;
        for (std::size_t i = 0; i < d.size(); ++i) d.c[i] -= y.c[i];
        return parseval_sq(d);
    };
    double acc = d2(a.p0, b.p0) + d2(a.phi, b.phi) + d2(a.mu, b.mu);
    for (std::size_t i = 0; i < a.u.size(); ++i) acc += d2(a.u[i], b.u[i]);
    return acc;
}

// Per-mode solve of the frozen-coefficient block system. RHS fields must be
// dealiased; the output then lives in the same band.
SpectralStack solve_modes(const std::vector<SpectralField>& fu, const SpectralField& fphi,
                          const SpectralField& fmu, const FrozenCoeffs& fr, double h,
                          const PhysParams& p) {
    const TorusGrid& g = fphi.grid;
    const int d = g.dim();
    SpectralStack out(g);

    const double rho_h = fr.rho_bar / h;
    const double half_kappa = 0.5 * p.kappa;
    const double c = fr.pressure_coef;

    for (std::size_t i = 0; i < fphi.size(); ++i) {
        const auto idx = g.spectral_index(i);
        std::array<double, 3> q{0.0, 0.0, 0.0};
        double m = 0.0;
        for (int a = 0; a < d; ++a) {
            q[a] = k_deriv(g, a, idx[a]);
            m += q[a] * q[a];
        }

        if (m == 0.0) {
            // Mean mode: p0 and mu_p0 are mean-free; momentum and phi rows
            // reduce to their mass terms.
            for (int a = 0; a < d; ++a) out.u[a].c[i] = fu[a].c[i] / rho_h;
            out.p0.c[i] = 0.0;
            out.phi.c[i] = h * fphi.c[i];
            out.mu.c[i] = 0.0;
            continue;
        }

        const double lambda = std::pow(m, p.s);
        const double gdiag = 1.0 / h + m * (lambda - half_kappa);
        const double A = rho_h + (4.0 / 3.0) * fr.eta_bar * m;
        const double B = rho_h + fr.eta_bar * m;
        if (!(gdiag > 0.0) || !(A > 0.0) || !(B > 0.0)) {
            throw SolverError("apply_Lk_inverse: singular per-mode block (h=" + std::to_string(h) +
                              ", |k|^2=" + std::to_string(m) + ")");
        }

        const std::complex<double> F = fphi.c[i] - m * fmu.c[i];
        const std::complex<double> M0 = (fphi.c[i] - F / (gdiag * h)) / m;

        std::complex<double> qdotf(0.0, 0.0);
        for (int a = 0; a < d; ++a) qdotf += q[a] * fu[a].c[i];

        const double denom_p = m * c / A + p.delta + p.alpha * p.alpha * m / (gdiag * h);
        const std::complex<double> ihat(0.0, 1.0);
        const std::complex<double> phat = -(p.alpha * m * M0 + ihat * qdotf / A) / denom_p;
        const std::complex<double> v = (qdotf - ihat * m * c * phat) / A;

        for (int a = 0; a < d; ++a) {
            out.u[a].c[i] =
                (fu[a].c[i] - (fr.eta_bar / 3.0) * v * q[a] - ihat * c * phat * q[a]) / B;
        }
        out.p0.c[i] = phat;
        out.phi.c[i] = (F - p.alpha * m * phat) / gdiag;
        out.mu.c[i] = (fphi.c[i] - out.phi.c[i] / h) / m;
    }
    return out;
}

SpectralField fft_dealiased(const ScalarField& f) {
    SpectralField fhat = forward_fft(f);
    dealias_inplace(fhat);
    return fhat;
}

ScalarField deriv_ifft(const SpectralField& fhat, int axis) {
    const TorusGrid& g = fhat.grid;
    SpectralField work(g);
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const auto idx = g.spectral_index(i);
        work.c[i] = std::complex<double>(0.0, k_deriv(g, axis, idx[axis])) * fhat.c[i];
    }
    return inverse_fft(work);
}

ScalarField spectral_div(const std::vector<SpectralField>& vhat) {
    const TorusGrid& g = vhat[0].grid;
    SpectralField acc(g);
    for (int a = 0; a < g.dim(); ++a) {
        for (std::size_t i = 0; i < acc.size(); ++i) {
            const auto idx = g.spectral_index(i);
            acc.c[i] += std::complex<double>(0.0, k_deriv(g, a, idx[a])) * vhat[a].c[i];
        }
    }
    return inverse_fft(acc);
}

} // namespace

FrozenCoeffs freeze_coeffs(const ScalarField& phi_k, const PhysParams& p) {
    FrozenCoeffs f;
    f.rho_bar = mean(density(phi_k, p));
    f.eta_bar = mean(viscosity(phi_k, p));
    f.pressure_coef = 1.0 - p.alpha * mean(phi_k);
    return f;
}

StackedFields apply_Lk_inverse(const StackedFields& rhs, const FrozenCoeffs& frozen, double h,
                               const PhysParams& p) {
    const TorusGrid& g = rhs.phi.grid;
    const int d = g.dim();
    std::vector<SpectralField> fu;
    fu.reserve(d);
    for (int a = 0; a < d; ++a) fu.push_back(fft_dealiased(rhs.u[a]));
    const SpectralField fphi = fft_dealiased(rhs.phi);
    const SpectralField fmu = fft_dealiased(rhs.mu_p0);

    SpectralStack sol = solve_modes(fu, fphi, fmu, frozen, h, p);
    StackedFields out(g);
    for (int a = 0; a < d; ++a) out.u[a] = inverse_fft(sol.u[a]);
    out.p0 = inverse_fft(sol.p0);
    out.phi = inverse_fft(sol.phi);
    out.mu_p0 = inverse_fft(sol.mu);
    return out;
}

std::pair<MixtureState, StepDiagnostics> step(const MixtureState& prev, double h,
                                              const PhysParams& p, const PicardSettings& settings,
                                              const PhiForcing& forcing) {
    if (!(h > 0.0)) throw std::invalid_argument("step: h must be positive");
    const TorusGrid& g = prev.phi.grid;
    const int d = g.dim();
    const bool matched = p.matched_density();

    // Frozen (previous-level) data.
    const ScalarField& phi_k = prev.phi;
    const ScalarField rho_k = density(phi_k, p);
    long eta_clamped = 0;
    const ScalarField eta_k = viscosity(phi_k, p, &eta_clamped);
    const FrozenCoeffs frozen = freeze_coeffs(phi_k, p);
    const double phi_k_mean = mean(phi_k);
    const double inv_h = 1.0 / h;
    const double drag_coef = p.pressure_drag_coef();

    ScalarField eta_fluct = eta_k;
    for (double& x : eta_fluct.v) x -= frozen.eta_bar;

    // rho_k * u_k / h, fixed over the iteration.
    VectorField mass_rhs(g);
    for (int a = 0; a < d; ++a) {
        for (std::size_t i = 0; i < g.point_count(); ++i) {
            mass_rhs[a].v[i] = rho_k.v[i] * prev.u[a].v[i] * inv_h;
        }
    }

    ScalarField forcing_field(g);
    const bool has_forcing = static_cast<bool>(forcing);
    if (has_forcing) forcing_field = forcing(g, prev.t + h);

    // Current iterate, real and spectral, starting from the previous level.
    VectorField u = prev.u;
    ScalarField phi = prev.phi;
    ScalarField p0 = prev.p0;
    ScalarField mu = prev.mu_p0;
    SpectralStack cur(g);
    for (int a = 0; a < d; ++a) cur.u[a] = fft_dealiased(u[a]);
    cur.p0 = fft_dealiased(p0);
    cur.phi = fft_dealiased(phi);
    cur.mu = fft_dealiased(mu);

    const std::size_t npts = g.point_count();
    double residual = 0.0;
    double mu_bar = prev.mu_bar;
    int iters = 0;

    for (int it = 1; it <= settings.max_iter; ++it) {
        iters = it;

        // --- assemble the variable-coefficient right side at the current iterate
        VectorField f_u(g);
        ScalarField rho = density(phi, p);

        // Mass flux z = dealias(rho u) and its divergence.
        std::vector<SpectralField> z_hat(d, SpectralField(g));
        VectorField z(g);
        if (matched) {
            for (int a = 0; a < d; ++a) {
                z_hat[a] = cur.u[a];
                z[a] = u[a];
            }
        } else {
            for (int a = 0; a < d; ++a) {
                ScalarField za(g);
                for (std::size_t i = 0; i < npts; ++i) za.v[i] = rho.v[i] * u[a].v[i];
                z_hat[a] = fft_dealiased(za);
                z[a] = inverse_fft(z_hat[a]);
            }
        }
        const ScalarField div_z = spectral_div(z_hat);

        // Velocity gradient (all d^2 entries) from the spectral iterate.
        std::vector<std::vector<ScalarField>> grad_u(d);
        for (int i = 0; i < d; ++i) {
            grad_u[i].reserve(d);
            for (int j = 0; j < d; ++j) grad_u[i].push_back(deriv_ifft(cur.u[i], j));
        }

        // Skew convection: 1/2 [ z.grad u + div(u x z) - u div z ].
        std::vector<SpectralField> t_hat(d, SpectralField(g));
        for (int i = 0; i < d; ++i) {
            SpectralField acc(g);
            for (int j = 0; j < d; ++j) {
                ScalarField tij(g);
                for (std::size_t m = 0; m < npts; ++m) tij.v[m] = u[i].v[m] * z[j].v[m];
                const SpectralField tij_hat = forward_fft(tij);
                for (std::size_t m = 0; m < acc.size(); ++m) {
                    const auto idx = g.spectral_index(m);
                    acc.c[m] += std::complex<double>(0.0, k_deriv(g, j, idx[j])) * tij_hat.c[m];
                }
            }
            t_hat[i] = acc;
        }
        for (int i = 0; i < d; ++i) {
            const ScalarField div_t = inverse_fft(t_hat[i]);
            for (std::size_t m = 0; m < npts; ++m) {
                double zdg = 0.0;
                for (int j = 0; j < d; ++j) zdg += z[j].v[m] * grad_u[i][j].v[m];
                f_u[i].v[m] = -0.5 * (zdg + div_t.v[m] - u[i].v[m] * div_z.v[m]);
            }
        }

        // Pressure and capillary couplings, mass fluctuation, delta drag.
        for (int a = 0; a < d; ++a) {
            const ScalarField dp = deriv_ifft(cur.p0, a);
            const ScalarField dmu = deriv_ifft(cur.mu, a);
            for (std::size_t m = 0; m < npts; ++m) {
                double acc = f_u[a].v[m];
                acc += mass_rhs[a].v[m];
                if (!matched) {
                    acc += (frozen.rho_bar - rho.v[m]) * u[a].v[m] * inv_h;
                    // (zeta rho - c_p) grad p0 = -alpha (phi - mean phi_k) grad p0
                    acc += p.alpha * (phi.v[m] - phi_k_mean) * dp.v[m];
                }
                acc -= phi.v[m] * dmu.v[m];
                if (p.delta > 0.0) acc -= drag_coef * p0.v[m] * u[a].v[m];
                f_u[a].v[m] = acc;
            }
        }

        // Viscosity-fluctuation stress divergence moved to the right side.
        {
            std::vector<SpectralField> sf_hat;
            sf_hat.reserve(d * (d + 1) / 2);
            ScalarField div_u_pt(g);
            for (std::size_t m = 0; m < npts; ++m) {
                double tr = 0.0;
                for (int a = 0; a < d; ++a) tr += grad_u[a][a].v[m];
                div_u_pt.v[m] = tr;
            }
            SymTensorField sf(g);
            for (int i = 0; i < d; ++i) {
                for (int j = i; j < d; ++j) {
                    ScalarField& c = sf.at(i, j);
                    for (std::size_t m = 0; m < npts; ++m) {
                        const double dij = 0.5 * (grad_u[i][j].v[m] + grad_u[j][i].v[m]);
                        double val = 2.0 * eta_fluct.v[m] * dij;
                        if (i == j) val -= (2.0 / 3.0) * eta_fluct.v[m] * div_u_pt.v[m];
                        c.v[m] = val;
                    }
                }
            }
            for (auto& c : sf.comp) sf_hat.push_back(forward_fft(c));
            for (int i = 0; i < d; ++i) {
                SpectralField acc(g);
                for (int j = 0; j < d; ++j) {
                    const SpectralField& sij = sf_hat[sf.flat_index(i, j)];
                    for (std::size_t m = 0; m < acc.size(); ++m) {
                        const auto idx = g.spectral_index(m);
                        acc.c[m] += std::complex<double>(0.0, k_deriv(g, j, idx[j])) * sij.c[m];
                    }
                }
                const ScalarField div_sf = inverse_fft(acc);
                for (std::size_t m = 0; m < npts; ++m) f_u[i].v[m] += div_sf.v[m];
            }
        }

        // phi equation right side: phi_k/h - div(dealias(phi u)) + forcing.
        ScalarField f_phi(g);
        {
            std::vector<SpectralField> w_hat(d, SpectralField(g));
            for (int a = 0; a < d; ++a) {
                ScalarField wa(g);
                for (std::size_t m = 0; m < npts; ++m) wa.v[m] = phi.v[m] * u[a].v[m];
                w_hat[a] = fft_dealiased(wa);
            }
            const ScalarField div_w = spectral_div(w_hat);
            for (std::size_t m = 0; m < npts; ++m) {
                f_phi.v[m] = phi_k.v[m] * inv_h - div_w.v[m];
            }
            if (has_forcing) f_phi += forcing_field;
        }

        // Potential row right side with the alias-free cubic and the mean
        // chemical potential of the current iterate.
        const ScalarField cube = dealiased_cube(phi);
        mu_bar = mean(cube) - 0.5 * p.kappa * (mean(phi) + phi_k_mean);
        ScalarField f_mu = cube;
        for (std::size_t m = 0; m < npts; ++m) {
            f_mu.v[m] -= 0.5 * p.kappa * phi_k.v[m] + mu_bar;
        }

        // --- solve the frozen-coefficient system
        std::vector<SpectralField> fu_hat;
        fu_hat.reserve(d);
        for (int a = 0; a < d; ++a) fu_hat.push_back(fft_dealiased(f_u[a]));
        SpectralField fphi_hat = fft_dealiased(f_phi);
        SpectralField fmu_hat = fft_dealiased(f_mu);

        SpectralStack next = solve_modes(fu_hat, fphi_hat, fmu_hat, frozen, h, p);
        // Mean-free projection of the multiplier fields.
        next.p0.c[0] = 0.0;
        next.mu.c[0] = 0.0;

        const double diff = stack_diff_norm_sq(next, cur);
        const double size = stack_norm_sq(next);
        residual = std::sqrt(diff) / std::max(std::sqrt(size), 1e-14);

        cur = next;
        for (int a = 0; a < d; ++a) u[a] = inverse_fft(cur.u[a]);
        p0 = inverse_fft(cur.p0);
        phi = inverse_fft(cur.phi);
        mu = inverse_fft(cur.mu);

        if (!std::isfinite(residual)) {
            throw PicardDivergedError("step: Picard iterate became non-finite at iteration " +
                                          std::to_string(it),
                                      it, residual);
        }
        if (residual <= settings.tol) break;
        if (it == settings.max_iter) {
            throw PicardDivergedError("step: Picard stalled at residual " +
                                          std::to_string(residual) + " after " +
                                          std::to_string(it) + " iterations",
                                      it, residual);
        }
    }

    MixtureState out(g);
    out.t = prev.t + h;
    out.u = u;
    out.phi = phi;
    out.p0 = p0;
    out.mu_p0 = mu;
    out.mu_bar = mu_bar;

    // Per-step telemetry: the discrete energy budget of the accepted step.
    StepDiagnostics diag;
    diag.picard_iters = iters;
    diag.residual = residual;
    diag.dt = h;
    diag.eta_clamped = eta_clamped;
    diag.constraint_residual = constraint_residual(out, p);

    const EnergyReport e_before = total_energy(prev.u, prev.phi, p);
    const EnergyReport e_after = total_energy(out.u, out.phi, p);
    diag.energy_before = e_before.total;
    diag.energy_after = e_after.total;
    diag.energy_report = e_after;
    diag.dissipation = dissipation(out.u, phi_k, out.mu_p0, out.p0, p);

    double jump = 0.0;
    for (std::size_t m = 0; m < npts; ++m) {
        double du2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double du = out.u[a].v[m] - prev.u[a].v[m];
            du2 += du * du;
        }
        jump += 0.5 * rho_k.v[m] * du2;
    }
    diag.kinetic_jump = jump * g.cell_volume();
    diag.energy_defect =
        e_after.total + diag.kinetic_jump + h * diag.dissipation.total() - e_before.total;

    return {std::move(out), diag};
}

double constraint_residual(const MixtureState& state, const PhysParams& p) {
    ScalarField r = divergence(state.u);
    axpy(r, p.delta, state.p0);
    const ScalarField lap_mu = laplacian(state.mu_p0);
    axpy(r, -p.alpha, lap_mu);
    return l2_norm(r);
}

ScalarField reconstruct_p1(const MixtureState& s0, const MixtureState& s1, const MixtureState& s2,
                           const PhysParams& p) {
    const double dt01 = s1.t - s0.t;
    const double dt12 = s2.t - s1.t;
    if (!(dt01 > 0.0) || std::abs(dt12 - dt01) > 1e-10 * dt01) {
        throw std::invalid_argument("reconstruct_p1: window must have uniform dt");
    }
    const ScalarField g0 = helmholtz(s0.u).potential;
    const ScalarField g2 = helmholtz(s2.u).potential;
    ScalarField p1 = p.zeta * s1.p0;
    axpy(p1, 1.0 / (s2.t - s0.t), g2 - g0);
    return p1;
}

RunResult run(const MixtureState& initial, const PhysParams& p, const Schedule& schedule,
              const PicardSettings& settings, const PhiForcing& forcing,
              const StepCallback& callback, bool keep_trajectory) {
    if (!(schedule.dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
    RunResult result;
    MixtureState state = initial;
    if (keep_trajectory) result.trajectory.push_back(state);

    const double t_eps = 1e-12 * std::max(1.0, std::abs(schedule.t_end));
    while (state.t < schedule.t_end - t_eps) {
        double attempt = std::min(schedule.dt, schedule.t_end - state.t);
        int backoffs = 0;
        for (;;) {
            try {
                auto [next, diag] = step(state, attempt, p, settings, forcing);
                state = std::move(next);
                if (callback) callback(state, diag);
                result.diagnostics.push_back(diag);
                if (keep_trajectory) result.trajectory.push_back(state);
                break;
            } catch (const PicardDivergedError& e) {
                ++backoffs;
                if (backoffs > settings.max_backoffs) {
                    throw SolverError("run: dt backoff exhausted at t=" + std::to_string(state.t) +
                                      " (last residual " + std::to_string(e.final_residual) +
                                      " after " + std::to_string(e.iterations) + " iterations)");
                }
                attempt *= settings.dt_backoff;
            }
        }
    }
    return result;
}

MixtureState sanitize_state(const MixtureState& state, const PhysParams& p) {
    MixtureState out(state.phi.grid);
    out.t = state.t;
    out.u = dealias(state.u);
    out.phi = dealias(state.phi);
    out.p0 = dealias(state.p0);
    out.mu_p0 = dealias(state.mu_p0);
    const double p0_mean = mean(out.p0);
    for (double& x : out.p0.v) x -= p0_mean;
    const double mu_mean = mean(out.mu_p0);
    for (double& x : out.mu_p0.v) x -= mu_mean;
    out.mu_bar = mean_chemical_potential(out.phi, p);
    return out;
}

} // namespace qinsch
