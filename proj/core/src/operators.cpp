#include "qinsch/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qinsch/errors.hpp"

namespace qinsch {

namespace {

// Squared physical wavenumber magnitude of a half-spectrum mode.
double k_squared(const TorusGrid& g, const std::array<int, 3>& idx) {
    double m = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        const double k = g.wavenumber(a, idx[a]);
        m += k * k;
    }
    return m;
}

// Wavenumber for derivative multipliers: zero at the Nyquist frequency.
double k_deriv(const TorusGrid& g, int axis, int index) {
    if (2 * g.freq(axis, index) == g.n(axis)) return 0.0;
    return g.wavenumber(axis, index);
}

} // namespace

double integrate(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.v) s += x;
    return s * f.grid.cell_volume();
}

double mean(const ScalarField& f) { return integrate(f) / f.grid.volume(); }

double l2_inner(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.v[i] * b.v[i];
    return s * a.grid.cell_volume();
}

double l2_norm(const ScalarField& f) { return std::sqrt(l2_inner(f, f)); }

double l2_norm(const VectorField& u) {
    double s = 0.0;
    for (const auto& c : u.comp) s += l2_inner(c, c);
    return std::sqrt(s);
}

SpectralField frac_laplacian(const SpectralField& fhat, double s) {
    if (!std::isfinite(s) || s <= 0.0) {
        throw std::invalid_argument("frac_laplacian: order s must be finite and positive, got " +
                                    std::to_string(s));
    }
    const TorusGrid& g = fhat.grid;
    SpectralField out(g);
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const double m = k_squared(g, g.spectral_index(i));
        out.c[i] = (m == 0.0) ? 0.0 : std::pow(m, s) * fhat.c[i];
    }
    return out;
}

ScalarField frac_laplacian(const ScalarField& f, double s) {
    return inverse_fft(frac_laplacian(forward_fft(f), s));
}

ScalarField inv_laplacian_zero_mean(const ScalarField& f, double tol_mean) {
    const double rms = l2_norm(f) / std::sqrt(f.grid.volume());
    const double m0 = mean(f);
    if (std::abs(m0) > tol_mean * rms) {
        throw MeanNotZeroError("inv_laplacian_zero_mean: input mean " + std::to_string(m0) +
                               " exceeds tolerance " + std::to_string(tol_mean) + " * rms(" +
                               std::to_string(rms) + ")");
    }
    SpectralField fhat = forward_fft(f);
    const TorusGrid& g = f.grid;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const double m = k_squared(g, g.spectral_index(i));
        fhat.c[i] = (m == 0.0) ? 0.0 : -fhat.c[i] / m;
    }
    return inverse_fft(fhat);
}

VectorField gradient(const ScalarField& f) {
    const TorusGrid& g = f.grid;
    const SpectralField fhat = forward_fft(f);
    VectorField out(g);
    SpectralField work(g);
    for (int a = 0; a < g.dim(); ++a) {
        for (std::size_t i = 0; i < fhat.size(); ++i) {
            const auto idx = g.spectral_index(i);
            work.c[i] = std::complex<double>(0.0, k_deriv(g, a, idx[a])) * fhat.c[i];
        }
        out[a] = inverse_fft(work);
    }
    return out;
}

ScalarField divergence(const VectorField& u) {
    const TorusGrid& g = u.grid;
    SpectralField acc(g);
    for (int a = 0; a < g.dim(); ++a) {
        const SpectralField chat = forward_fft(u[a]);
        for (std::size_t i = 0; i < chat.size(); ++i) {
            const auto idx = g.spectral_index(i);
            acc.c[i] += std::complex<double>(0.0, k_deriv(g, a, idx[a])) * chat.c[i];
        }
    }
    return inverse_fft(acc);
}

ScalarField laplacian(const ScalarField& f) {
    SpectralField fhat = forward_fft(f);
    const TorusGrid& g = f.grid;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        fhat.c[i] *= -k_squared(g, g.spectral_index(i));
    }
    return inverse_fft(fhat);
}

SymTensorField sym_gradient(const VectorField& u) {
    const TorusGrid& g = u.grid;
    const int d = g.dim();
    SymTensorField out(g);
    std::vector<SpectralField> uhat;
    uhat.reserve(d);
    for (int a = 0; a < d; ++a) uhat.push_back(forward_fft(u[a]));
    SpectralField work(g);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            // (grad u)_ij + (grad u)_ji over 2: (i k_j uhat_i + i k_i uhat_j)/2
            for (std::size_t m = 0; m < work.size(); ++m) {
                const auto idx = g.spectral_index(m);
                const std::complex<double> dj(0.0, k_deriv(g, j, idx[j]));
                const std::complex<double> di(0.0, k_deriv(g, i, idx[i]));
                work.c[m] = 0.5 * (dj * uhat[i].c[m] + di * uhat[j].c[m]);
            }
            out.at(i, j) = inverse_fft(work);
        }
    }
    return out;
}

HelmholtzDecomposition helmholtz(const VectorField& u) {
    const TorusGrid& g = u.grid;
    const int d = g.dim();
    std::vector<SpectralField> uhat;
    uhat.reserve(d);
    for (int a = 0; a < d; ++a) uhat.push_back(forward_fft(u[a]));

    SpectralField ghat(g);
    std::vector<SpectralField> phat(d, SpectralField(g));
    for (std::size_t m = 0; m < ghat.size(); ++m) {
        const auto idx = g.spectral_index(m);
        std::array<double, 3> k{0.0, 0.0, 0.0};
        double msq = 0.0;
        for (int a = 0; a < d; ++a) {
            k[a] = k_deriv(g, a, idx[a]);
            msq += k[a] * k[a];
        }
        std::complex<double> div(0.0, 0.0);
        for (int a = 0; a < d; ++a) div += std::complex<double>(0.0, k[a]) * uhat[a].c[m];
        if (msq > 0.0) {
            ghat.c[m] = -div / msq;  // Laplacian(g) = div u
            for (int a = 0; a < d; ++a) {
                const std::complex<double> grad_g = std::complex<double>(0.0, k[a]) * ghat.c[m];
                phat[a].c[m] = uhat[a].c[m] - grad_g;
            }
        } else {
            // Zero mode (and pure-Nyquist corners): no gradient part.
            ghat.c[m] = 0.0;
            for (int a = 0; a < d; ++a) phat[a].c[m] = uhat[a].c[m];
        }
    }
    HelmholtzDecomposition out{VectorField(g), inverse_fft(ghat)};
    for (int a = 0; a < d; ++a) out.solenoidal[a] = inverse_fft(phat[a]);
    return out;
}

double sobolev_norm(const ScalarField& f, double s) {
    if (!std::isfinite(s) || s < 0.0) {
        throw std::invalid_argument("sobolev_norm: order s must be finite and >= 0");
    }
    const SpectralField fhat = forward_fft(f);
    const TorusGrid& g = f.grid;
    double acc = 0.0;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const auto idx = g.spectral_index(i);
        const double w = g.mode_weight(idx[g.dim() - 1]);
        const double m = k_squared(g, idx);
        acc += w * std::pow(1.0 + m, s) * std::norm(fhat.c[i]);
    }
    return std::sqrt(acc * g.volume());
}

double h1_norm(const VectorField& u) {
    double s = 0.0;
    for (const auto& c : u.comp) {
        const double n = sobolev_norm(c, 1.0);
        s += n * n;
    }
    return std::sqrt(s);
}

void dealias_inplace(SpectralField& fhat) {
    const TorusGrid& g = fhat.grid;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const auto idx = g.spectral_index(i);
        for (int a = 0; a < g.dim(); ++a) {
            if (std::abs(g.freq(a, idx[a])) > g.dealias_cut(a)) {
                fhat.c[i] = 0.0;
                break;
            }
        }
    }
}

SpectralField dealias(const SpectralField& fhat) {
    SpectralField out = fhat;
    dealias_inplace(out);
    return out;
}

ScalarField dealias(const ScalarField& f) {
    SpectralField fhat = forward_fft(f);
    dealias_inplace(fhat);
    return inverse_fft(fhat);
}

VectorField dealias(const VectorField& u) {
    VectorField out(u.grid);
    for (int a = 0; a < u.dim(); ++a) out[a] = dealias(u[a]);
    return out;
}

bool is_dealiased(const SpectralField& fhat, double tol) {
    const TorusGrid& g = fhat.grid;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const auto idx = g.spectral_index(i);
        for (int a = 0; a < g.dim(); ++a) {
            if (std::abs(g.freq(a, idx[a])) > g.dealias_cut(a) && std::abs(fhat.c[i]) > tol) {
                return false;
            }
        }
    }
    return true;
}

namespace {

// Copy modes of `src` that exist on `dst`'s lattice into `dst`; everything
// else in dst stays zero. Nyquist rows of either grid are skipped.
void copy_band(const SpectralField& src, SpectralField& dst) {
    const TorusGrid& gs = src.grid;
    const TorusGrid& gd = dst.grid;
    const int d = gs.dim();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const auto idx = gs.spectral_index(i);
        std::array<int, 3> f{0, 0, 0};
        bool keep = true;
        for (int a = 0; a < d; ++a) {
            f[a] = gs.freq(a, idx[a]);
            if (2 * std::abs(f[a]) >= gs.n(a) || 2 * std::abs(f[a]) >= gd.n(a)) {
                keep = false;
                break;
            }
        }
        if (!keep) continue;
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) {
            const int nd = gd.n(a);
            const int j = (f[a] >= 0) ? f[a] : nd + f[a];
            const std::size_t extent =
                (a == d - 1) ? static_cast<std::size_t>(gd.n_half_last()) : static_cast<std::size_t>(nd);
            flat = flat * extent + static_cast<std::size_t>(j);
        }
        dst.c[flat] = src.c[i];
    }
}

} // namespace

ScalarField dealiased_cube(const ScalarField& f) {
    const TorusGrid& g = f.grid;
    std::array<int, 3> n2{g.n(0) * 2, g.n(1) * 2, g.dim() == 3 ? g.n(2) * 2 : 1};
    const TorusGrid fine(g.dim(), n2, {g.length(0), g.length(1), g.dim() == 3 ? g.length(2) : 1.0});

    SpectralField src = forward_fft(f);
    SpectralField padded(fine);
    copy_band(src, padded);
    ScalarField ff = inverse_fft(padded);
    for (double& x : ff.v) x = x * x * x;
    SpectralField cube_hat = forward_fft(ff);

    SpectralField out_hat(g);
    copy_band(cube_hat, out_hat);
    dealias_inplace(out_hat);
    return inverse_fft(out_hat);
}

ScalarField resample(const ScalarField& f, const TorusGrid& target) {
    const TorusGrid& g = f.grid;
    if (g.dim() != target.dim()) {
        throw std::invalid_argument("resample: dimension mismatch");
    }
    for (int a = 0; a < g.dim(); ++a) {
        if (g.length(a) != target.length(a)) {
            throw std::invalid_argument("resample: period mismatch on axis " + std::to_string(a));
        }
    }
    SpectralField src = forward_fft(f);
    SpectralField dst(target);
    copy_band(src, dst);
    return inverse_fft(dst);
}

VectorField resample(const VectorField& u, const TorusGrid& target) {
    VectorField out(target);
    for (int a = 0; a < u.dim(); ++a) out[a] = resample(u[a], target);
    return out;
}

} // namespace qinsch
