#include "doctest.h"

#include <cmath>

#include "qinsch/errors.hpp"
#include "qinsch/init.hpp"
#include "qinsch/operators.hpp"
#include "oracles.hpp"

using namespace qinsch;

namespace {

ScalarField wave(const TorusGrid& g, std::array<double, 3> k, double amp, double phase = 0.0) {
    ScalarField f(g);
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        const auto idx = g.point_index(i);
        double arg = phase;
        for (int a = 0; a < g.dim(); ++a) arg += k[a] * g.freq_scale(a) * g.coord(a, idx[a]);
        f.v[i] = amp * std::cos(arg);
    }
    return f;
}

ScalarField random_band_field(const TorusGrid& g, std::uint64_t seed) {
    DeterministicRng rng(seed);
    ScalarField f(g);
    for (double& x : f.v) x = rng.symmetric();
    return dealias(f);
}

double rel_l2(const ScalarField& got, const ScalarField& want) {
    return l2_norm(got - want) / std::max(l2_norm(want), 1e-300);
}

} // namespace

TEST_CASE("TorusGrid invariants") {
    CHECK_THROWS_AS(TorusGrid::square(2, 6), std::invalid_argument);   // n < 8
    CHECK_THROWS_AS(TorusGrid::square(2, 9), std::invalid_argument);   // odd
    CHECK_THROWS_AS(TorusGrid::square(1, 16), std::invalid_argument);  // dim
    CHECK_THROWS_AS(TorusGrid::square(4, 16), std::invalid_argument);

    const TorusGrid g2 = TorusGrid::square(2, 16);
    CHECK(g2.point_count() == 256);
    CHECK(g2.spectral_count() == 16 * 9);
    CHECK(g2.volume() == doctest::Approx(4 * std::numbers::pi * std::numbers::pi));

    const TorusGrid g3 = TorusGrid::square(3, 8);
    CHECK(g3.point_count() == 512);
    CHECK(g3.spectral_count() == 8 * 8 * 5);

    // |k| = 0 only at the zero mode
    int zero_modes = 0;
    for (std::size_t i = 0; i < g2.spectral_count(); ++i) {
        const auto idx = g2.spectral_index(i);
        double m = 0;
        for (int a = 0; a < 2; ++a) m += g2.wavenumber(a, idx[a]) * g2.wavenumber(a, idx[a]);
        if (m == 0.0) ++zero_modes;
    }
    CHECK(zero_modes == 1);
}

TEST_CASE("round trip and Parseval across grid sizes") {
    for (int n : {8, 16, 32, 64}) {
        const TorusGrid g = TorusGrid::square(2, n);
        DeterministicRng rng(100 + n);
        ScalarField f(g);
        for (double& x : f.v) x = rng.symmetric();

        const ScalarField back = inverse_fft(forward_fft(f));
        CHECK(rel_l2(back, f) < 1e-12);

        const SpectralField fh = forward_fft(f);
        double spec = 0.0;
        for (std::size_t i = 0; i < fh.size(); ++i) {
            const auto idx = g.spectral_index(i);
            spec += g.mode_weight(idx[1]) * std::norm(fh.c[i]);
        }
        spec *= g.volume();
        const double quad = l2_inner(f, f);
        CHECK(std::abs(spec - quad) / quad < 1e-10);
    }
    // 3D
    const TorusGrid g3 = TorusGrid::square(3, 16);
    ScalarField f3 = random_band_field(g3, 7);
    CHECK(rel_l2(inverse_fft(forward_fft(f3)), f3) < 1e-12);
}

TEST_CASE("fractional Laplacian single modes and errors") {
    const TorusGrid g = TorusGrid::square(2, 32);
    const ScalarField c1 = wave(g, {1, 0, 0}, 1.0);
    for (double s : {0.7, 1.0, 1.6}) {
        CHECK(rel_l2(frac_laplacian(c1, s), c1) < 1e-12);  // |k| = 1 multiplier is 1
    }

    ScalarField constant(g);
    for (double& x : constant.v) x = 3.7;
    CHECK(l2_norm(frac_laplacian(constant, 1.1)) < 1e-12);

    const ScalarField c2 = wave(g, {2, 0, 0}, 1.0);
    const double mult = std::pow(2.0, 3.2);
    CHECK(mult == doctest::Approx(9.18958683997628).epsilon(1e-12));
    CHECK(rel_l2(frac_laplacian(c2, 1.6), mult * c2) < 1e-12);

    CHECK_THROWS_AS(frac_laplacian(c1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(frac_laplacian(c1, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(frac_laplacian(c1, std::nan("")), std::invalid_argument);
}

TEST_CASE("fractional Laplacian composition property") {
    for (int dim : {2, 3}) {
        const TorusGrid g = TorusGrid::square(dim, dim == 2 ? 32 : 16);
        const ScalarField f = random_band_field(g, 40 + dim);
        const ScalarField twice = frac_laplacian(frac_laplacian(f, 0.8), 0.8);
        const ScalarField once = frac_laplacian(f, 1.6);
        CHECK(rel_l2(twice, once) < 1e-10);
    }
}

TEST_CASE("inverse Laplacian examples") {
    const TorusGrid g = TorusGrid::square(2, 32);
    const ScalarField c1 = wave(g, {1, 0, 0}, 1.0);
    CHECK(rel_l2(inv_laplacian_zero_mean(c1), -1.0 * c1) < 1e-12);

    const ScalarField f = wave(g, {2, 0, 0}, 1.0) +
                          wave(g, {0, 3, 0}, 1.0, -0.5 * std::numbers::pi);  // cos(2x) + sin(3y)
    const ScalarField want = (-0.25) * wave(g, {2, 0, 0}, 1.0) +
                             (-1.0 / 9.0) * wave(g, {0, 3, 0}, 1.0, -0.5 * std::numbers::pi);
    CHECK(rel_l2(inv_laplacian_zero_mean(f), want) < 1e-12);

    ScalarField one(g);
    for (double& x : one.v) x = 1.0;
    CHECK_THROWS_AS(inv_laplacian_zero_mean(one), MeanNotZeroError);
}

TEST_CASE("gradient, divergence, symmetric gradient examples") {
    const TorusGrid g = TorusGrid::square(2, 32);
    const ScalarField cosx = wave(g, {1, 0, 0}, 1.0);
    const VectorField grad = gradient(cosx);
    const ScalarField msinx = wave(g, {1, 0, 0}, -1.0, -0.5 * std::numbers::pi);  // -sin(x)
    CHECK(rel_l2(grad[0], msinx) < 1e-12);
    CHECK(l2_norm(grad[1]) < 1e-12);

    VectorField shear(g);
    shear[0] = wave(g, {0, 1, 0}, -1.0, -0.5 * std::numbers::pi);  // -sin(y)
    CHECK(l2_norm(divergence(shear)) < 1e-12);

    VectorField u(g);
    u[0] = wave(g, {0, 1, 0}, 1.0, -0.5 * std::numbers::pi);  // sin(y)
    const SymTensorField du = sym_gradient(u);
    const ScalarField half_cosy = wave(g, {0, 1, 0}, 0.5);
    CHECK(rel_l2(du.at(0, 1), half_cosy) < 1e-12);
    CHECK(l2_norm(du.at(0, 0)) < 1e-12);
    CHECK(l2_norm(du.at(1, 1)) < 1e-12);
}

TEST_CASE("Helmholtz decomposition examples and dense oracle") {
    const TorusGrid g = TorusGrid::square(2, 16);

    // pure gradient input
    VectorField gradcos(g);
    gradcos[0] = wave(g, {1, 0, 0}, -1.0, -0.5 * std::numbers::pi);  // d/dx cos x = -sin x
    auto h1 = helmholtz(gradcos);
    CHECK(l2_norm(h1.solenoidal) < 1e-12);
    CHECK(rel_l2(h1.potential, wave(g, {1, 0, 0}, 1.0)) < 1e-12);

    // divergence-free input
    VectorField sol(g);
    sol[0] = wave(g, {0, 1, 0}, -1.0, -0.5 * std::numbers::pi);  // -sin(y)
    auto h2 = helmholtz(sol);
    CHECK(rel_l2(h2.solenoidal[0], sol[0]) < 1e-12);
    CHECK(l2_norm(h2.potential) < 1e-12);

    // seeded random input vs the dense-DFT projection oracle
    VectorField u(g);
    u[0] = random_band_field(g, 51);
    u[1] = random_band_field(g, 52);
    auto h3 = helmholtz(u);

    VectorField pu_oracle;
    ScalarField g_oracle;
    oracle::dense_helmholtz(u, pu_oracle, g_oracle);
    for (int a = 0; a < 2; ++a) CHECK(rel_l2(h3.solenoidal[a], pu_oracle[a]) < 1e-11);
    CHECK(rel_l2(h3.potential, g_oracle) < 1e-11);

    // reconstruction and solenoidality
    VectorField rec = h3.solenoidal + gradient(h3.potential);
    for (int a = 0; a < 2; ++a) CHECK(rel_l2(rec[a], u[a]) < 1e-12);
    CHECK(l2_norm(divergence(h3.solenoidal)) / h1_norm(u) < 1e-12);
    CHECK(std::abs(mean(h3.potential)) < 1e-13);

    // idempotence: projecting the solenoidal part changes nothing; the
    // potential of a pure gradient returns the mean-free potential
    auto h4 = helmholtz(h3.solenoidal);
    for (int a = 0; a < 2; ++a) CHECK(rel_l2(h4.solenoidal[a], h3.solenoidal[a]) < 1e-12);
    ScalarField pot = random_band_field(g, 53);
    auto h5 = helmholtz(gradient(pot));
    ScalarField pot0 = pot;
    const double pm = mean(pot);
    for (double& x : pot0.v) x -= pm;
    CHECK(rel_l2(h5.potential, pot0) < 1e-11);
}

TEST_CASE("gradient of inverse Laplacian then divergence recovers input") {
    for (int dim : {2, 3}) {
        const TorusGrid g = TorusGrid::square(dim, dim == 2 ? 32 : 16);
        ScalarField f = random_band_field(g, 60 + dim);
        const double m = mean(f);
        for (double& x : f.v) x -= m;
        const ScalarField rec = divergence(gradient(inv_laplacian_zero_mean(f)));
        CHECK(rel_l2(rec, f) < 1e-10);
    }
}

TEST_CASE("Sobolev norm examples and dense oracle") {
    const TorusGrid g2 = TorusGrid::square(2, 16);
    ScalarField c(g2);
    for (double& x : c.v) x = -2.5;
    CHECK(sobolev_norm(c, 0.7) ==
          doctest::Approx(2.5 * 2.0 * std::numbers::pi).epsilon(1e-12));

    const TorusGrid g3 = TorusGrid::square(3, 8);
    ScalarField c3(g3);
    for (double& x : c3.v) x = 1.5;
    CHECK(sobolev_norm(c3, 1.6) ==
          doctest::Approx(1.5 * std::pow(2.0 * std::numbers::pi, 1.5)).epsilon(1e-12));

    const ScalarField cosx = wave(g2, {1, 0, 0}, 1.0);
    CHECK(sobolev_norm(cosx, 0.0) ==
          doctest::Approx(2.0 * std::numbers::pi / std::sqrt(2.0)).epsilon(1e-12));

    const ScalarField f = random_band_field(g2, 71);
    const double got = sobolev_norm(f, 1.6);
    const double want = oracle::dense_sobolev_norm(f, 1.6);
    CHECK(std::abs(got - want) / want < 1e-10);
}

TEST_CASE("dealiasing rule and alias-free cube") {
    const TorusGrid g = TorusGrid::square(2, 32);

    const ScalarField keep = wave(g, {1, 0, 0}, 1.0);
    CHECK(rel_l2(dealias(keep), keep) < 1e-14);

    const ScalarField drop = wave(g, {12, 0, 0}, 1.0);  // 12 > 32/3
    CHECK(l2_norm(dealias(drop)) < 1e-13);

    // cube of cos(10 x): the 10+10+10 = 30 combination must not fold back;
    // the kept band holds only the 3/4 cos(10x) term of cos^3.
    const ScalarField c10 = wave(g, {10, 0, 0}, 1.0);
    const ScalarField cube = dealiased_cube(c10);
    CHECK(rel_l2(cube, 0.75 * c10) < 1e-12);

    // two-mode hand expansion: (cos x + cos 2x)^3 truncated to |k| <= 5
    const TorusGrid g16 = TorusGrid::square(2, 16);
    const ScalarField f = wave(g16, {1, 0, 0}, 1.0) + wave(g16, {2, 0, 0}, 1.0);
    ScalarField want(g16);
    for (double& x : want.v) x = 0.75;
    want += (9.0 / 4.0) * wave(g16, {1, 0, 0}, 1.0);
    want += (9.0 / 4.0) * wave(g16, {2, 0, 0}, 1.0);
    want += wave(g16, {3, 0, 0}, 1.0);
    want += 0.75 * wave(g16, {4, 0, 0}, 1.0);
    want += 0.75 * wave(g16, {5, 0, 0}, 1.0);
    CHECK(rel_l2(dealiased_cube(f), want) < 1e-12);

    // is_dealiased sees through the projection
    CHECK(is_dealiased(forward_fft(dealias(drop)), 1e-13));
    CHECK(!is_dealiased(forward_fft(drop), 1e-13));
}

TEST_CASE("spectral resampling") {
    const TorusGrid coarse = TorusGrid::square(2, 16);
    const TorusGrid fine = TorusGrid::square(2, 32);

    const ScalarField f = random_band_field(coarse, 81);
    const ScalarField up = resample(f, fine);
    const ScalarField back = resample(up, coarse);
    CHECK(rel_l2(back, f) < 1e-12);

    // restriction drops content beyond the coarse band
    const ScalarField hi = wave(fine, {12, 0, 0}, 1.0);
    CHECK(l2_norm(resample(hi, coarse)) < 1e-12);

    CHECK_THROWS_AS(resample(f, TorusGrid::square(3, 16)), std::invalid_argument);
}
