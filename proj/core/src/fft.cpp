#include "qinsch/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace qinsch {

namespace {

// One cached plan pair per lattice shape. Plans are created with
// FFTW_ESTIMATE so planning never depends on runtime timing and results are
// reproducible run to run. Transforms go through the cache's own aligned
// buffers; callers' vectors are copied in and out.
//
// The cache is thread_local (independent runs may execute on different
// threads); FFTW's planner itself is not thread-safe, so plan creation is
// serialized by a process-wide mutex.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanEntry {
    PlanEntry(int rank, const int* n) {
        std::size_t pts = 1, mds = 1;
        for (int a = 0; a < rank; ++a) {
            pts *= static_cast<std::size_t>(n[a]);
            mds *= static_cast<std::size_t>(a == rank - 1 ? n[a] / 2 + 1 : n[a]);
        }
        points = pts;
        modes = mds;
        real = fftw_alloc_real(points);
        cplx = fftw_alloc_complex(modes);
        const std::lock_guard<std::mutex> lock(planner_mutex());
        fwd = fftw_plan_dft_r2c(rank, n, real, cplx, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r(rank, n, cplx, real, FFTW_ESTIMATE);
    }
    ~PlanEntry() {
        const std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(cplx);
    }
    PlanEntry(const PlanEntry&) = delete;
    PlanEntry& operator=(const PlanEntry&) = delete;

    std::size_t points = 0;
    std::size_t modes = 0;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

PlanEntry& plans_for(const TorusGrid& g) {
    thread_local std::map<std::array<int, 4>, std::unique_ptr<PlanEntry>> cache;
    std::array<int, 4> key{g.dim(), g.n(0), g.n(1), g.dim() == 3 ? g.n(2) : 0};
    auto it = cache.find(key);
    if (it == cache.end()) {
        int n[3] = {g.n(0), g.n(1), g.dim() == 3 ? g.n(2) : 0};
        it = cache.emplace(key, std::make_unique<PlanEntry>(g.dim(), n)).first;
    }
    return *it->second;
}

} // namespace

SpectralField forward_fft(const ScalarField& f) {
    PlanEntry& p = plans_for(f.grid);
    std::memcpy(p.real, f.v.data(), p.points * sizeof(double));
    fftw_execute(p.fwd);
    SpectralField out(f.grid);
    const double scale = 1.0 / static_cast<double>(p.points);
    for (std::size_t i = 0; i < p.modes; ++i) {
        out.c[i] = std::complex<double>(p.cplx[i][0] * scale, p.cplx[i][1] * scale);
    }
    return out;
}

ScalarField inverse_fft(const SpectralField& fhat) {
    PlanEntry& p = plans_for(fhat.grid);
    // c2r destroys its input, so the coefficients are staged in the cache buffer.
    for (std::size_t i = 0; i < p.modes; ++i) {
        p.cplx[i][0] = fhat.c[i].real();
        p.cplx[i][1] = fhat.c[i].imag();
    }
    fftw_execute(p.bwd);
    ScalarField out(fhat.grid);
    std::memcpy(out.v.data(), p.real, p.points * sizeof(double));
    return out;
}

} // namespace qinsch
