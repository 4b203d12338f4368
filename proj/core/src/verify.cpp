#include "qinsch/verify.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "qinsch/checkpoint.hpp"
#include "qinsch/csv.hpp"
#include "qinsch/errors.hpp"
#include "qinsch/init.hpp"
#include "qinsch/operators.hpp"

namespace qinsch {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
    std::ostringstream ss;
    ss.precision(3);
    ss << x;
    return ss.str();
}

double rel_err(const ScalarField& got, const ScalarField& want) {
    const double scale = std::max(l2_norm(want), 1e-300);
    return l2_norm(got - want) / scale;
}

ScalarField cosine_field(const TorusGrid& g, int axis, double k, double amp, bool use_sin = false) {
    ScalarField f(g);
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        const auto idx = g.point_index(i);
        const double arg = k * g.freq_scale(axis) * g.coord(axis, idx[axis]);
        f.v[i] = amp * (use_sin ? std::sin(arg) : std::cos(arg));
    }
    return f;
}

// ---------------------------------------------------------------- criterion 1
CheckResult check_spectral() {
    const auto t0 = Clock::now();
    CheckResult r{"1 spectral-exactness", false, "", 0.0};
    const TorusGrid g = TorusGrid::square(2, 64);
    double worst = 0.0;
    std::string why;

    auto note = [&](const std::string& name, double err, double tol) {
        worst = std::max(worst, err / tol);
        if (err > tol && why.empty()) why = name + " err=" + fmt(err);
    };

    // fractional Laplacian single-mode examples; the |k|=1 any-s case uses
    // s = 1.2 because |k|^{2s} amplifies the FFT round-off floor at 64^2
    // (s = 1.6 is exercised by the |k|=2 example below and at n = 32 in the
    // unit tests)
    const ScalarField c1 = cosine_field(g, 0, 1, 1.0);
    note("frac |k|=1", rel_err(frac_laplacian(c1, 1.2), c1), 1e-12);
    ScalarField constf(g);
    for (double& x : constf.v) x = 3.7;
    note("frac const", l2_norm(frac_laplacian(constf, 1.3)), 1e-12);
    const ScalarField c2 = cosine_field(g, 0, 2, 1.0);
    note("frac |k|=2", rel_err(frac_laplacian(c2, 1.6), std::pow(2.0, 3.2) * c2), 1e-12);

    // inverse Laplacian examples
    note("invlap cos", rel_err(inv_laplacian_zero_mean(c1), -1.0 * c1), 1e-12);
    {
        const ScalarField f = c2 + cosine_field(g, 1, 3, 1.0, true);
        const ScalarField want = (-0.25) * c2 + (-1.0 / 9.0) * cosine_field(g, 1, 3, 1.0, true);
        note("invlap two-mode", rel_err(inv_laplacian_zero_mean(f), want), 1e-12);
        bool threw = false;
        try {
            ScalarField one(g);
            for (double& x : one.v) x = 1.0;
            (void)inv_laplacian_zero_mean(one);
        } catch (const MeanNotZeroError&) {
            threw = true;
        }
        if (!threw) {
            r.detail = "inv_laplacian accepted nonzero mean";
            r.seconds = seconds_since(t0);
            return r;
        }
    }

    // Helmholtz examples
    {
        VectorField grad_cos(g);
        grad_cos[0] = cosine_field(g, 0, 1, -1.0, true);  // d/dx cos(x) = -sin(x)
        auto h = helmholtz(grad_cos);
        note("helmholtz gradient", l2_norm(h.solenoidal) / l2_norm(grad_cos), 1e-12);
        note("helmholtz potential", rel_err(h.potential, c1), 1e-12);

        VectorField sol(g);
        sol[0] = cosine_field(g, 1, 1, -1.0, true);
        auto h2 = helmholtz(sol);
        note("helmholtz solenoidal", rel_err(h2.solenoidal[0], sol[0]), 1e-12);
        note("helmholtz zero-g", l2_norm(h2.potential) / l2_norm(sol), 1e-12);

        // seeded random field: reconstruction and div-free projection
        DeterministicRng rng(7);
        VectorField u(g);
        for (int a = 0; a < 2; ++a) {
            for (double& x : u[a].v) x = rng.symmetric();
            u[a] = dealias(u[a]);
        }
        auto h3 = helmholtz(u);
        VectorField rec = h3.solenoidal + gradient(h3.potential);
        double rec_err = 0.0;
        for (int a = 0; a < 2; ++a) rec_err = std::max(rec_err, rel_err(rec[a], u[a]));
        note("helmholtz reconstruct", rec_err, 1e-12);
        note("helmholtz div-free", l2_norm(divergence(h3.solenoidal)) / h1_norm(u), 1e-12);
    }

    // Parseval on a seeded random field
    {
        DeterministicRng rng(11);
        ScalarField f(g);
        for (double& x : f.v) x = rng.symmetric();
        const double quad = l2_inner(f, f);
        const SpectralField fh = forward_fft(f);
        double spec = 0.0;
        for (std::size_t i = 0; i < fh.size(); ++i) {
            const auto idx = g.spectral_index(i);
            spec += g.mode_weight(idx[1]) * std::norm(fh.c[i]);
        }
        spec *= g.volume();
        note("parseval", std::abs(spec - quad) / quad, 1e-10);
    }

    r.seconds = seconds_since(t0);
    r.pass = why.empty() && r.seconds < 1.0;
    r.detail = why.empty() ? "worst margin " + fmt(worst) + ", " + fmt(r.seconds) + " s"
                           : why;
    if (why.empty() && r.seconds >= 1.0) r.detail += " (over 1 s budget)";
    return r;
}

// ------------------------------------------------- criterion 2 shared run
struct SpinodalRunData {
    std::vector<StepDiagnostics> diags;
    std::vector<double> u_h1;
    std::vector<double> mass_phi;
    std::vector<double> mass_rho;
    double mass_phi0 = 0.0, mass_rho0 = 0.0;
    double phi_lo = 0.0, phi_hi = 0.0;
    double e0 = 0.0;
    std::string csv;
    double seconds = 0.0;
    double picard_tol = 1e-10;
};

Config criterion2_config() {
    return parse_config("grid.dim = 2\n"
                        "grid.n = 64\n"
                        "params.epsilon = -0.5\n"
                        "params.nu = 2\n"
                        "params.s = 1.6\n"
                        "params.delta = 1e-6\n"
                        "time.dt = 1e-3\n"
                        "time.t_end = 0.2\n"
                        "init.phi_preset = spinodal\n"
                        "init.u_preset = zero\n"
                        "init.noise_amp = 0.01\n"
                        "init.seed = 1\n");
}

SpinodalRunData run_spinodal_case() {
    const auto t0 = Clock::now();
    const Config cfg = criterion2_config();
    const PhysParams p = cfg.phys();
    MixtureState init = make_initial_state(cfg, p);

    SpinodalRunData data;
    data.picard_tol = cfg.picard.tol;
    data.mass_phi0 = mean(init.phi);
    data.mass_rho0 = mean(density(init.phi, p));
    data.phi_lo = field_min(init.phi);
    data.phi_hi = field_max(init.phi);
    data.e0 = total_energy(init.u, init.phi, p).total;
    data.csv = csv_header();

    auto cb = [&](const MixtureState& s, const StepDiagnostics& d) {
        data.diags.push_back(d);
        data.u_h1.push_back(h1_norm(s.u));
        data.mass_phi.push_back(mean(s.phi));
        data.mass_rho.push_back(mean(density(s.phi, p)));
        data.phi_lo = std::min(data.phi_lo, field_min(s.phi));
        data.phi_hi = std::max(data.phi_hi, field_max(s.phi));
        data.csv += csv_row(s, d, p);
    };
    run(init, p, cfg.schedule(), cfg.picard_settings(), {}, cb, /*keep_trajectory=*/false);
    data.seconds = seconds_since(t0);
    return data;
}

CheckResult check_energy_inequality(const SpinodalRunData& d) {
    CheckResult r{"2 energy-inequality", true, "", d.seconds};
    double worst_defect = -1e300;
    double prev_e = d.e0;
    int increases = 0;
    for (const auto& diag : d.diags) {
        const double tol = 1e-8 * std::max(1.0, std::abs(diag.energy_before));
        worst_defect = std::max(worst_defect, diag.energy_defect);
        if (diag.energy_defect > tol) r.pass = false;
        const bool plateau = std::abs(prev_e - diag.energy_after) <=
                             1e-12 * std::max(1.0, std::abs(prev_e));
        if (diag.energy_after >= prev_e && !plateau) ++increases;
        prev_e = diag.energy_after;
    }
    if (increases > 0) r.pass = false;
    if (d.seconds > 120.0) r.pass = false;
    r.detail = std::to_string(d.diags.size()) + " steps, worst defect " + fmt(worst_defect) +
               ", increases " + std::to_string(increases) + ", " + fmt(d.seconds) + " s";
    return r;
}

CheckResult check_conservation(const SpinodalRunData& d) {
    CheckResult r{"3 conservation", true, "", 0.0};
    double dphi = 0.0, drho = 0.0;
    for (std::size_t i = 0; i < d.mass_phi.size(); ++i) {
        dphi = std::max(dphi, std::abs(d.mass_phi[i] - d.mass_phi0));
        drho = std::max(drho, std::abs(d.mass_rho[i] - d.mass_rho0));
    }
    r.pass = dphi <= 1e-11 && drho <= 1e-11;
    r.detail = "max |mean phi drift| " + fmt(dphi) + ", max |mean rho drift| " + fmt(drho);
    return r;
}

CheckResult check_constraint(const SpinodalRunData& d) {
    CheckResult r{"4 constraint", true, "", 0.0};
    double worst = 0.0;
    for (std::size_t i = 0; i < d.diags.size(); ++i) {
        const double bound = 10.0 * d.picard_tol * (1.0 + d.u_h1[i]);
        worst = std::max(worst, d.diags[i].constraint_residual / bound);
        if (d.diags[i].constraint_residual > bound) r.pass = false;
    }
    r.detail = "worst residual/bound " + fmt(worst);
    return r;
}

CheckResult check_phi_bound(const SpinodalRunData& d, const RateReport* sweep) {
    CheckResult r{"8 phi-bound", true, "", 0.0};
    double lo = d.phi_lo, hi = d.phi_hi;
    if (sweep) {
        for (double x : sweep->phi_min) lo = std::min(lo, x);
        for (double x : sweep->phi_max) hi = std::max(hi, x);
    }
    r.pass = lo > -1.5 && hi < 1.5;
    r.detail = "phi range [" + fmt(lo) + ", " + fmt(hi) + "] vs (-1.5, 1.5)";
    return r;
}

// ---------------------------------------------------------------- criterion 5
CheckResult check_reduction() {
    const auto t0 = Clock::now();
    CheckResult r{"5 alpha0-reduction", true, "", 0.0};

    const TorusGrid g = TorusGrid::square(2, 64);
    const PhysParams p = PhysParams::from_alpha(0.0, /*nu=*/2.0, /*kappa=*/1.0, /*s=*/1.6,
                                                /*delta=*/0.0);
    const VectorField u0 = make_u_preset("taylor-green(0.5)", g);
    ScalarField phi0 = make_phi_preset("spinodal", g, 0.01, 2);

    MixtureState qinit(g);
    qinit.u = u0;
    qinit.phi = phi0;
    qinit.mu_p0 = chemical_potential(phi0, p);
    qinit.mu_bar = mean(qinit.mu_p0);
    for (double& x : qinit.mu_p0.v) x -= qinit.mu_bar;
    qinit = sanitize_state(qinit, p);

    ModelHState hinit(g);
    hinit.u = u0;
    hinit.phi = phi0;
    hinit.mu = chemical_potential(phi0, p);
    hinit = sanitize_modelh_state(hinit, p);

    const Schedule sched{1e-3, 10e-3};
    const PicardSettings set;
    RunResult qr = run(qinit, p, sched, set);
    ModelHRunResult hr = run_modelh(hinit, p, sched, set);

    double worst = 0.0;
    for (std::size_t i = 0; i < qr.trajectory.size() && i < hr.trajectory.size(); ++i) {
        const MixtureState& a = qr.trajectory[i];
        const ModelHState& b = hr.trajectory[i];
        for (int c = 0; c < g.dim(); ++c) worst = std::max(worst, l2_norm(a.u[c] - b.u[c]));
        worst = std::max(worst, l2_norm(a.phi - b.phi));
        worst = std::max(worst, l2_norm(a.p0 - b.p));
        ScalarField mu_q = a.mu_p0;
        for (double& x : mu_q.v) x += a.mu_bar;
        worst = std::max(worst, l2_norm(mu_q - b.mu));
    }
    r.pass = worst <= 1e-9;
    r.seconds = seconds_since(t0);
    r.detail = "max per-field L2 gap over 10 steps " + fmt(worst);
    return r;
}

// ---------------------------------------------------------------- criterion 10
CheckResult check_determinism(const SpinodalRunData& first) {
    const auto t0 = Clock::now();
    CheckResult r{"10 determinism", false, "", 0.0};
    SpinodalRunData second = run_spinodal_case();
    r.pass = (first.csv == second.csv) && !first.csv.empty();
    r.seconds = seconds_since(t0);
    r.detail = r.pass ? "rerun CSV byte-identical (" + std::to_string(first.csv.size()) + " bytes)"
                      : "reruns differ";
    return r;
}

} // namespace

// -------------------------------------------------------------- criterion 6
ManufacturedResult manufactured_order_study(const std::vector<double>& dts, int n, double t_end) {
    if (dts.size() < 2) throw std::invalid_argument("manufactured: need at least two dts");
    const TorusGrid g = TorusGrid::square(2, n);
    const PhysParams p = PhysParams::from_alpha(0.0, 1.0, 1.0, 1.6, 0.0);

    // phi*(x,t) = exp(-t) cos(x1); with kappa = 1 the |k|=1 linear part cancels
    // and the forcing must balance d/dt phi* - Lap(phi*^3).
    PhiForcing forcing = [](const TorusGrid& grid, double t) {
        ScalarField f(grid);
        const double e1 = std::exp(-t);
        const double e3 = std::exp(-3.0 * t);
        for (std::size_t i = 0; i < grid.point_count(); ++i) {
            const auto idx = grid.point_index(i);
            const double x = grid.freq_scale(0) * grid.coord(0, idx[0]);
            f.v[i] = -e1 * std::cos(x) + e3 * (3.0 * std::cos(x) + 9.0 * std::cos(3.0 * x)) / 4.0;
        }
        return f;
    };

    ManufacturedResult res;
    res.dts = dts;
    for (double dt : dts) {
        MixtureState init(g);
        init.phi = cosine_field(g, 0, 1, 1.0);
        init.mu_bar = mean_chemical_potential(init.phi, p);
        MixtureState last(g);
        bool have = false;
        run(init, p, Schedule{dt, t_end}, PicardSettings{}, forcing,
            [&](const MixtureState& s, const StepDiagnostics&) {
                last = s;
                have = true;
            },
            /*keep_trajectory=*/false);
        if (!have) throw SolverError("manufactured: no steps taken");
        const ScalarField exact = std::exp(-t_end) * cosine_field(g, 0, 1, 1.0);
        res.errors.push_back(l2_norm(last.phi - exact));
    }
    res.order = fit_loglog(res.dts, res.errors).slope;
    return res;
}

VerifySummary run_verification(bool full) {
    VerifySummary s;
    s.checks.push_back(check_spectral());

    SpinodalRunData c2 = run_spinodal_case();
    s.checks.push_back(check_energy_inequality(c2));
    s.checks.push_back(check_conservation(c2));
    s.checks.push_back(check_constraint(c2));
    s.checks.push_back(check_reduction());

    RateReport sweep;
    bool have_sweep = false;
    if (full) {
        {
            const auto t0 = Clock::now();
            CheckResult r{"6 manufactured-order", false, "", 0.0};
            const ManufacturedResult m = manufactured_order_study({0.025, 0.0125, 0.00625});
            r.seconds = seconds_since(t0);
            r.pass = m.order >= 0.85 && m.order <= 1.15 && r.seconds <= 60.0;
            r.detail = "order " + fmt(m.order) + " (errors";
            for (double e : m.errors) r.detail += " " + fmt(e);
            r.detail += "), " + fmt(r.seconds) + " s";
            s.checks.push_back(r);
        }
        {
            const auto t0 = Clock::now();
            CheckResult r{"7 alpha-rate", false, "", 0.0};
            SweepSetup setup;
            const TorusGrid g = TorusGrid::square(2, 64);
            setup.u0 = make_u_preset("taylor-green(0.1)", g);
            setup.phi0 = make_phi_preset("cos-mix(0.1,0.05)", g, 0.0, 1);
            setup.base = PhysParams::from_alpha(0.0, 1.0, 1.0, 1.6, 1e-6);
            setup.alphas = {0.2, 0.1, 0.05, 0.025};
            setup.schedule = Schedule{1e-3, 0.5};
            sweep = alpha_sweep(setup);
            have_sweep = true;
            r.seconds = seconds_since(t0);
            const double last_ratio = sweep.halving_ratios.back();
            const bool slope_ok = sweep.fitted_slope >= 0.8 && sweep.fitted_slope <= 1.3;
            const bool ratio_ok = last_ratio >= 1.6 && last_ratio <= 2.4;
            r.pass = slope_ok && ratio_ok && r.seconds <= 900.0;
            r.detail = "slope " + fmt(sweep.fitted_slope) + " (R^2 " + fmt(sweep.r_squared) +
                       "), last ratio " + fmt(last_ratio) + ", supE";
            for (double e : sweep.sup_rel_energy) r.detail += " " + fmt(e);
            // the distance-scale view of the same data: sqrt(sup E_rel)
            // converges with the first-order rate the analysis names
            r.detail += "; distance-scale slope " + fmt(0.5 * sweep.fitted_slope) +
                        ", last ratio " + fmt(std::sqrt(last_ratio));
            r.detail += ", " + fmt(r.seconds) + " s";
            s.checks.push_back(r);
        }
    }

    s.checks.push_back(check_phi_bound(c2, have_sweep ? &sweep : nullptr));

    if (full && have_sweep) {
        CheckResult r{"9 hs-uniformity", false, "", 0.0};
        double lo = sweep.hs_diag[0], hi = sweep.hs_diag[0];
        for (double x : sweep.hs_diag) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        r.pass = hi <= 2.0 * lo;
        r.detail = "H^{s+1/2} time-integrals within factor " + fmt(hi / lo);
        s.checks.push_back(r);

        CheckResult m{"relent monotone-sweep", false, "", 0.0};
        m.pass = true;
        for (std::size_t i = 0; i + 1 < sweep.sup_rel_energy.size(); ++i) {
            // alphas decrease along the list; sup E_rel may not grow (5% slack)
            if (sweep.sup_rel_energy[i + 1] > 1.05 * sweep.sup_rel_energy[i]) m.pass = false;
        }
        m.detail = "sup E_rel non-increasing as alpha decreases (5% slack)";
        s.checks.push_back(m);
    }

    s.checks.push_back(check_determinism(c2));
    return s;
}

bool VerifySummary::all_pass() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

void print_verification(const VerifySummary& summary, std::ostream& out) {
    for (const auto& c : summary.checks) {
        out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
    }
    int passed = 0;
    for (const auto& c : summary.checks) passed += c.pass ? 1 : 0;
    out << passed << "/" << summary.checks.size() << " checks passed\n";
}

} // namespace qinsch
