#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace qinsch {

/// Uniform periodic lattice on the d-torus (d = 2 or 3) with the spectral
/// bookkeeping: per-axis signed integer frequencies scaled by 2*pi/length.
///
/// Real samples are stored row-major with axis 0 slowest. Spectral
/// coefficients use the real-to-complex half layout: the last axis holds
/// n/2+1 complex entries, Hermitian partners are implied.
class TorusGrid {
public:
    TorusGrid(int dim, std::array<int, 3> n, std::array<double, 3> length);

    /// Cubic/square grid with n points per axis, period `length` (default 2*pi).
    static TorusGrid square(int dim, int n, double length = 2.0 * std::numbers::pi);

    int dim() const { return dim_; }
    int n(int axis) const { return n_[axis]; }
    double length(int axis) const { return length_[axis]; }

    std::size_t point_count() const { return points_; }
    std::size_t spectral_count() const { return modes_; }

    /// Number of complex entries along the (halved) last axis.
    int n_half_last() const { return n_[dim_ - 1] / 2 + 1; }

    double volume() const { return volume_; }
    double cell_volume() const { return cell_volume_; }
    double spacing(int axis) const { return length_[axis] / n_[axis]; }
    double coord(int axis, int index) const { return spacing(axis) * index; }

    /// Signed integer frequency for spectral index `index` on `axis`.
    /// The last axis only ranges over [0, n/2]; other axes wrap to negative
    /// frequencies above n/2. The Nyquist index maps to +n/2.
    int freq(int axis, int index) const {
        const int nn = n_[axis];
        return (2 * index <= nn) ? index : index - nn;
    }

    /// Physical wavenumber 2*pi*freq/length.
    double wavenumber(int axis, int index) const {
        return freq_scale_[axis] * freq(axis, index);
    }

    double freq_scale(int axis) const { return freq_scale_[axis]; }

    /// Largest kept integer frequency of the 2/3 dealiasing rule: floor(n/3).
    int dealias_cut(int axis) const { return n_[axis] / 3; }

    /// Decode a flat spectral index into per-axis indices (size dim).
    std::array<int, 3> spectral_index(std::size_t flat) const;
    /// Decode a flat real-space index into per-axis indices (size dim).
    std::array<int, 3> point_index(std::size_t flat) const;

    /// Hermitian multiplicity of a half-spectrum mode: 2 when the last-axis
    /// index has an implied conjugate partner, else 1.
    double mode_weight(int last_axis_index) const {
        const int nl = n_[dim_ - 1];
        return (last_axis_index == 0 || 2 * last_axis_index == nl) ? 1.0 : 2.0;
    }

    bool operator==(const TorusGrid& o) const;
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }

private:
    int dim_;
    std::array<int, 3> n_;
    std::array<double, 3> length_;
    std::array<double, 3> freq_scale_;
    std::size_t points_;
    std::size_t modes_;
    double volume_;
    double cell_volume_;
};

} // namespace qinsch
