// Test-only oracles, independent of the spectral implementation path:
// a dense O(N^2) DFT, norms and projections computed from it, and a dense
// complex Gaussian-elimination solve of the per-mode block system.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "qinsch/field.hpp"

namespace qinsch::oracle {

using cplx = std::complex<double>;

/// Full-lattice coefficients c(k), k per axis in 0..n-1 (frequency j or j-n),
/// computed by the plain normalized DFT sum.
struct DenseSpectrum {
    TorusGrid grid = TorusGrid::square(2, 8);
    std::vector<cplx> c;  ///< row-major over the full lattice

    int freq(int axis, int index) const {
        const int n = grid.n(axis);
        return (2 * index <= n) ? index : index - n;
    }
    std::size_t flat(const std::array<int, 3>& idx) const {
        std::size_t f = 0;
        for (int a = 0; a < grid.dim(); ++a) {
            f = f * static_cast<std::size_t>(grid.n(a)) + static_cast<std::size_t>(idx[a]);
        }
        return f;
    }
};

inline DenseSpectrum dense_dft(const ScalarField& f) {
    const TorusGrid& g = f.grid;
    const int d = g.dim();
    DenseSpectrum out;
    out.grid = g;
    out.c.assign(g.point_count(), cplx(0.0, 0.0));
    for (std::size_t m = 0; m < g.point_count(); ++m) {
        const auto kidx = g.point_index(m);
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < g.point_count(); ++j) {
            const auto xidx = g.point_index(j);
            double phase = 0.0;
            for (int a = 0; a < d; ++a) {
                phase += out.freq(a, kidx[a]) * g.freq_scale(a) * g.coord(a, xidx[a]);
            }
            acc += f.v[j] * cplx(std::cos(phase), -std::sin(phase));
        }
        out.c[m] = acc / static_cast<double>(g.point_count());
    }
    return out;
}

inline double dense_sobolev_norm(const ScalarField& f, double s) {
    const DenseSpectrum sp = dense_dft(f);
    const TorusGrid& g = f.grid;
    double acc = 0.0;
    for (std::size_t m = 0; m < sp.c.size(); ++m) {
        const auto idx = g.point_index(m);
        double k2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double k = sp.freq(a, idx[a]) * g.freq_scale(a);
            k2 += k * k;
        }
        acc += std::pow(1.0 + k2, s) * std::norm(sp.c[m]);
    }
    return std::sqrt(acc * g.volume());
}

/// Helmholtz projection computed from the dense spectrum (Nyquist rows are
/// excluded from the gradient part, matching the derivative convention).
inline void dense_helmholtz(const VectorField& u, VectorField& solenoidal, ScalarField& potential) {
    const TorusGrid& g = u.grid;
    const int d = g.dim();
    std::vector<DenseSpectrum> uh;
    uh.reserve(d);
    for (int a = 0; a < d; ++a) uh.push_back(dense_dft(u[a]));

    solenoidal = VectorField(g);
    potential = ScalarField(g);
    for (std::size_t j = 0; j < g.point_count(); ++j) {
        const auto xidx = g.point_index(j);
        std::array<double, 3> x{0, 0, 0};
        for (int a = 0; a < d; ++a) x[a] = g.coord(a, xidx[a]);
        std::array<cplx, 3> pu{cplx(0, 0), cplx(0, 0), cplx(0, 0)};
        cplx pot(0.0, 0.0);
        for (std::size_t m = 0; m < g.point_count(); ++m) {
            const auto kidx = g.point_index(m);
            std::array<double, 3> k{0, 0, 0};
            double k2 = 0.0;
            double phase = 0.0;
            for (int a = 0; a < d; ++a) {
                const int fr = uh[0].freq(a, kidx[a]);
                k[a] = (2 * fr == g.n(a)) ? 0.0 : fr * g.freq_scale(a);
                k2 += k[a] * k[a];
                phase += fr * g.freq_scale(a) * x[a];
            }
            const cplx e(std::cos(phase), std::sin(phase));
            std::array<cplx, 3> uk{cplx(0, 0), cplx(0, 0), cplx(0, 0)};
            for (int a = 0; a < d; ++a) uk[a] = uh[a].c[m];
            if (k2 > 0.0) {
                cplx kdotu(0.0, 0.0);
                for (int a = 0; a < d; ++a) kdotu += k[a] * uk[a];
                const cplx ghat = kdotu / k2;  // grad-part coefficient along k
                for (int a = 0; a < d; ++a) pu[a] += (uk[a] - k[a] * ghat) * e;
                // potential g with i k ghat_vec = grad part: ghat_scalar = -i kdotu/k2
                pot += (cplx(0.0, -1.0) * kdotu / k2) * e;
            } else {
                for (int a = 0; a < d; ++a) pu[a] += uk[a] * e;
            }
        }
        for (int a = 0; a < d; ++a) solenoidal[a].v[j] = pu[a].real();
        potential.v[j] = pot.real();
    }
}

/// Dense complex solve of the (d+3) x (d+3) per-mode system for one mode:
/// rows: momentum (d), constraint, phi, mu. Unknown order: u(d), p0, phi, mu.
inline std::vector<cplx> dense_mode_solve(const std::array<double, 3>& q, int d, double rho_bar,
                                          double eta_bar, double c_pressure, double h,
                                          double alpha, double delta, double kappa, double s,
                                          const std::vector<cplx>& rhs) {
    const int n = d + 3;
    double m = 0.0;
    for (int a = 0; a < d; ++a) m += q[a] * q[a];
    const double lambda = m > 0.0 ? std::pow(m, s) : 0.0;

    std::vector<std::vector<cplx>> A(n, std::vector<cplx>(n, cplx(0, 0)));
    const cplx I(0.0, 1.0);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            A[i][j] = (i == j ? rho_bar / h + eta_bar * m : 0.0) + (eta_bar / 3.0) * q[i] * q[j];
        }
        A[i][d] = I * q[i] * c_pressure;
    }
    for (int j = 0; j < d; ++j) A[d][j] = I * q[j];
    A[d][d] = delta;
    A[d][d + 2] = alpha * m;
    A[d + 1][d + 1] = 1.0 / h;
    A[d + 1][d + 2] = m;
    A[d + 2][d] = -alpha;
    A[d + 2][d + 1] = 0.5 * kappa - lambda;
    A[d + 2][d + 2] = 1.0;

    std::vector<cplx> b = rhs;
    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        }
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < n; ++r) {
            const cplx f = A[r][col] / A[col][col];
            for (int cc = col; cc < n; ++cc) A[r][cc] -= f * A[col][cc];
            b[r] -= f * b[col];
        }
    }
    std::vector<cplx> x(n, cplx(0, 0));
    for (int r = n - 1; r >= 0; --r) {
        cplx acc = b[r];
        for (int cc = r + 1; cc < n; ++cc) acc -= A[r][cc] * x[cc];
        x[r] = acc / A[r][r];
    }
    return x;
}

} // namespace qinsch::oracle
