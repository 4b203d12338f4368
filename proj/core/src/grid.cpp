#include "qinsch/grid.hpp"

#include <stdexcept>
#include <string>

namespace qinsch {

TorusGrid::TorusGrid(int dim, std::array<int, 3> n, std::array<double, 3> length)
    : dim_(dim), n_(n), length_(length) {
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("TorusGrid: dim must be 2 or 3, got " + std::to_string(dim));
    }
    points_ = 1;
    modes_ = 1;
    volume_ = 1.0;
    cell_volume_ = 1.0;
    for (int a = 0; a < dim_; ++a) {
        if (n_[a] < 8 || n_[a] % 2 != 0) {
            throw std::invalid_argument("TorusGrid: n must be even and >= 8 on every axis, got " +
                                        std::to_string(n_[a]));
        }
        if (!(length_[a] > 0.0)) {
            throw std::invalid_argument("TorusGrid: length must be positive");
        }
        freq_scale_[a] = 2.0 * std::numbers::pi / length_[a];
        points_ *= static_cast<std::size_t>(n_[a]);
        modes_ *= static_cast<std::size_t>(a == dim_ - 1 ? n_[a] / 2 + 1 : n_[a]);
        volume_ *= length_[a];
        cell_volume_ *= length_[a] / n_[a];
    }
    for (int a = dim_; a < 3; ++a) {
        n_[a] = 1;
        length_[a] = 1.0;
        freq_scale_[a] = 0.0;
    }
}

TorusGrid TorusGrid::square(int dim, int n, double length) {
    return TorusGrid(dim, {n, n, n}, {length, length, length});
}

std::array<int, 3> TorusGrid::spectral_index(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    std::size_t rem = flat;
    for (int a = dim_ - 1; a >= 0; --a) {
        const std::size_t extent = (a == dim_ - 1) ? static_cast<std::size_t>(n_half_last())
                                                   : static_cast<std::size_t>(n_[a]);
        idx[a] = static_cast<int>(rem % extent);
        rem /= extent;
    }
    return idx;
}

std::array<int, 3> TorusGrid::point_index(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    std::size_t rem = flat;
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(rem % static_cast<std::size_t>(n_[a]));
        rem /= static_cast<std::size_t>(n_[a]);
    }
    return idx;
}

bool TorusGrid::operator==(const TorusGrid& o) const {
    if (dim_ != o.dim_) return false;
    for (int a = 0; a < dim_; ++a) {
        if (n_[a] != o.n_[a] || length_[a] != o.length_[a]) return false;
    }
    return true;
}

} // namespace qinsch
