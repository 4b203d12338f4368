#include "qinsch/field.hpp"

#include <cassert>
#include <cmath>

namespace qinsch {

namespace {
void check_same(const ScalarField& a, const ScalarField& b) {
    assert(a.grid == b.grid);
    (void)a;
    (void)b;
}
} // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    check_same(a, b);
    ScalarField r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.v[i] += b.v[i];
    return r;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    check_same(a, b);
    ScalarField r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.v[i] -= b.v[i];
    return r;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    check_same(a, b);
    ScalarField r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.v[i] *= b.v[i];
    return r;
}

ScalarField operator*(double s, const ScalarField& a) {
    ScalarField r = a;
    for (double& x : r.v) x *= s;
    return r;
}

ScalarField& operator+=(ScalarField& a, const ScalarField& b) {
    check_same(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) a.v[i] += b.v[i];
    return a;
}

ScalarField& operator-=(ScalarField& a, const ScalarField& b) {
    check_same(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) a.v[i] -= b.v[i];
    return a;
}

ScalarField& operator*=(ScalarField& a, double s) {
    for (double& x : a.v) x *= s;
    return a;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    VectorField r = a;
    for (int i = 0; i < r.dim(); ++i) r[i] += b[i];
    return r;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    VectorField r = a;
    for (int i = 0; i < r.dim(); ++i) r[i] -= b[i];
    return r;
}

VectorField operator*(double s, const VectorField& a) {
    VectorField r = a;
    for (int i = 0; i < r.dim(); ++i) r[i] *= s;
    return r;
}

void axpy(ScalarField& a, double s, const ScalarField& b) {
    check_same(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) a.v[i] += s * b.v[i];
}

void axpy(VectorField& a, double s, const VectorField& b) {
    for (int i = 0; i < a.dim(); ++i) axpy(a[i], s, b[i]);
}

double field_min(const ScalarField& f) {
    double m = f.v.empty() ? 0.0 : f.v[0];
    for (double x : f.v) m = std::min(m, x);
    return m;
}

double field_max(const ScalarField& f) {
    double m = f.v.empty() ? 0.0 : f.v[0];
    for (double x : f.v) m = std::max(m, x);
    return m;
}

bool all_finite(const ScalarField& f) {
    for (double x : f.v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

bool all_finite(const VectorField& f) {
    for (const auto& c : f.comp) {
        if (!all_finite(c)) return false;
    }
    return true;
}

} // namespace qinsch
