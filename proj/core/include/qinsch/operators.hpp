#pragma once

#include "qinsch/fft.hpp"

namespace qinsch {

// ---------------------------------------------------------------------------
// Quadrature and inner products. All integrals over the torus are uniform
// trapezoid sums (spectrally exact for band-limited integrands).
// ---------------------------------------------------------------------------

double integrate(const ScalarField& f);
double mean(const ScalarField& f);
double l2_inner(const ScalarField& a, const ScalarField& b);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& u);

// ---------------------------------------------------------------------------
// Differential and fractional operators (Fourier multipliers).
//
// Derivative multipliers ik are zeroed at the Nyquist frequency of the
// differentiated axis so that derivatives of real fields stay real. Pure
// magnitude multipliers (|k|^{2s}, 1/|k|^2, Sobolev weights) use the full
// signed-frequency magnitude including n/2 at Nyquist.
// ---------------------------------------------------------------------------

/// Lambda^{2s}: coefficients scaled by |k|^{2s}; the zero mode is annihilated.
/// Pass s/2 for the half power Lambda^{s}. Rejects non-finite or s <= 0.
ScalarField frac_laplacian(const ScalarField& f, double s);
SpectralField frac_laplacian(const SpectralField& fhat, double s);

/// Unique zero-mean g with Laplacian(g) = f, per mode g = -f/|k|^2.
/// Throws MeanNotZeroError when |mean(f)| exceeds tol_mean relative to the
/// RMS of f.
ScalarField inv_laplacian_zero_mean(const ScalarField& f, double tol_mean = 1e-10);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);
ScalarField laplacian(const ScalarField& f);
SymTensorField sym_gradient(const VectorField& u);

/// u = solenoidal + grad(potential); div(solenoidal) = 0, mean(potential) = 0,
/// and the k = 0 part of u stays in the solenoidal piece.
struct HelmholtzDecomposition {
    VectorField solenoidal;
    ScalarField potential;
};
HelmholtzDecomposition helmholtz(const VectorField& u);

/// H^s norm: (sum_k (1+|k|^2)^s |fhat(k)|^2 |T|)^{1/2}; s = 0 is the L2 norm.
double sobolev_norm(const ScalarField& f, double s);
double h1_norm(const VectorField& u);

// ---------------------------------------------------------------------------
// Dealiasing (2/3 rule) and alias-free products.
// ---------------------------------------------------------------------------

/// Zero every coefficient with any per-axis |frequency| > n/3 (rounded down).
void dealias_inplace(SpectralField& fhat);
SpectralField dealias(const SpectralField& fhat);
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& u);

/// True wherever dealias would change nothing.
bool is_dealiased(const SpectralField& fhat, double tol = 0.0);

/// Alias-free cube: the exact 2/3-band truncation of f^3 where f is the
/// trigonometric interpolant. Evaluated on a 2x zero-padded grid; cubing the
/// grid samples directly would fold triple-sum frequencies back into the
/// kept band.
ScalarField dealiased_cube(const ScalarField& f);

// ---------------------------------------------------------------------------
// Spectral resampling between grids with the same dim and lengths.
// Prolongation zero-pads, restriction truncates; exact for fields inside the
// open band of the coarser grid (Nyquist content is dropped).
// ---------------------------------------------------------------------------

ScalarField resample(const ScalarField& f, const TorusGrid& target);
VectorField resample(const VectorField& u, const TorusGrid& target);

} // namespace qinsch
