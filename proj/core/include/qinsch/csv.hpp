#pragma once

#include <string>

#include "qinsch/stepper.hpp"

namespace qinsch {

/// Diagnostics CSV schema, major format version 1. Columns are fixed:
///   t, E_total, E_kin, E_free, E_frac, D_visc, D_mu, D_p,
///   mass_phi, mass_rho, phi_min, phi_max,
///   constraint_residual, picard_iters, energy_defect
/// Numbers are printed with %.17g so reruns are byte-identical.
std::string csv_header();
std::string csv_row(const MixtureState& state, const StepDiagnostics& diag, const PhysParams& p);

/// Streams one row per accepted step (honoring `every`) into a file.
class DiagnosticsCsv {
public:
    DiagnosticsCsv(const std::string& path, const PhysParams& p, int every = 1);
    ~DiagnosticsCsv();
    DiagnosticsCsv(const DiagnosticsCsv&) = delete;
    DiagnosticsCsv& operator=(const DiagnosticsCsv&) = delete;

    void on_step(const MixtureState& state, const StepDiagnostics& diag);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    PhysParams params_;
    int every_;
    long step_count_ = 0;
    void* file_ = nullptr;  // FILE*
};

} // namespace qinsch
