#pragma once

#include <complex>
#include <vector>

#include "qinsch/grid.hpp"

namespace qinsch {

/// Real samples of a scalar unknown at the grid points.
struct ScalarField {
    ScalarField() = default;
    explicit ScalarField(const TorusGrid& g, double fill = 0.0)
        : grid(g), v(g.point_count(), fill) {}

    TorusGrid grid = TorusGrid::square(2, 8);
    std::vector<double> v;

    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
    std::size_t size() const { return v.size(); }
};

/// dim scalar components on a shared grid.
struct VectorField {
    VectorField() = default;
    explicit VectorField(const TorusGrid& g) : grid(g), comp(g.dim(), ScalarField(g)) {}

    TorusGrid grid = TorusGrid::square(2, 8);
    std::vector<ScalarField> comp;

    int dim() const { return static_cast<int>(comp.size()); }
    ScalarField& operator[](int i) { return comp[i]; }
    const ScalarField& operator[](int i) const { return comp[i]; }
};

/// Complex Fourier coefficients in the real-to-complex half layout; the
/// implied other half is the Hermitian mirror, so the field is real.
struct SpectralField {
    SpectralField() = default;
    explicit SpectralField(const TorusGrid& g)
        : grid(g), c(g.spectral_count(), std::complex<double>(0.0, 0.0)) {}

    TorusGrid grid = TorusGrid::square(2, 8);
    std::vector<std::complex<double>> c;

    std::complex<double>& operator[](std::size_t i) { return c[i]; }
    const std::complex<double>& operator[](std::size_t i) const { return c[i]; }
    std::size_t size() const { return c.size(); }
};

/// Symmetric rank-2 tensor samples (stress, symmetric gradient). Components
/// are stored for i <= j in row order: 2D (00,01,11), 3D (00,01,02,11,12,22).
struct SymTensorField {
    SymTensorField() = default;
    explicit SymTensorField(const TorusGrid& g)
        : grid(g), comp(g.dim() * (g.dim() + 1) / 2, ScalarField(g)) {}

    TorusGrid grid = TorusGrid::square(2, 8);
    std::vector<ScalarField> comp;

    int flat_index(int i, int j) const {
        const int d = grid.dim();
        if (i > j) std::swap(i, j);
        return i * d - i * (i - 1) / 2 + (j - i);
    }
    ScalarField& at(int i, int j) { return comp[flat_index(i, j)]; }
    const ScalarField& at(int i, int j) const { return comp[flat_index(i, j)]; }
};

// Pointwise arithmetic helpers; all operands must share a grid.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
ScalarField& operator+=(ScalarField& a, const ScalarField& b);
ScalarField& operator-=(ScalarField& a, const ScalarField& b);
ScalarField& operator*=(ScalarField& a, double s);

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);

/// a += s*b
void axpy(ScalarField& a, double s, const ScalarField& b);
void axpy(VectorField& a, double s, const VectorField& b);

double field_min(const ScalarField& f);
double field_max(const ScalarField& f);
bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& f);

} // namespace qinsch
