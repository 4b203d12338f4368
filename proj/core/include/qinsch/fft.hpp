#pragma once

#include "qinsch/field.hpp"

namespace qinsch {

/// Forward transform, normalized so that coefficients are the Fourier-series
/// coefficients of the trigonometric interpolant: f(x) = sum_k fhat(k) e^{ik.x}.
SpectralField forward_fft(const ScalarField& f);

/// Inverse of forward_fft (exact up to round-off).
ScalarField inverse_fft(const SpectralField& fhat);

} // namespace qinsch
