#include "qinsch/csv.hpp"

#include <cstdio>

#include "qinsch/errors.hpp"
#include "qinsch/operators.hpp"

namespace qinsch {

namespace {
void append_num(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out += buf;
}
} // namespace

std::string csv_header() {
    return "t,E_total,E_kin,E_free,E_frac,D_visc,D_mu,D_p,mass_phi,mass_rho,phi_min,phi_max,"
           "constraint_residual,picard_iters,energy_defect\n";
}

std::string csv_row(const MixtureState& state, const StepDiagnostics& diag, const PhysParams& p) {
    std::string out;
    out.reserve(360);
    append_num(out, state.t);
    out += ',';
    append_num(out, diag.energy_report.total);
    out += ',';
    append_num(out, diag.energy_report.kinetic);
    out += ',';
    append_num(out, diag.energy_report.potential);
    out += ',';
    append_num(out, diag.energy_report.fractional);
    out += ',';
    append_num(out, diag.dissipation.viscous);
    out += ',';
    append_num(out, diag.dissipation.chemical);
    out += ',';
    append_num(out, diag.dissipation.pressure);
    out += ',';
    append_num(out, integrate(state.phi));
    out += ',';
    append_num(out, integrate(density(state.phi, p)));
    out += ',';
    append_num(out, field_min(state.phi));
    out += ',';
    append_num(out, field_max(state.phi));
    out += ',';
    append_num(out, diag.constraint_residual);
    out += ',';
    out += std::to_string(diag.picard_iters);
    out += ',';
    append_num(out, diag.energy_defect);
    out += '\n';
    return out;
}

DiagnosticsCsv::DiagnosticsCsv(const std::string& path, const PhysParams& p, int every)
    : path_(path), params_(p), every_(every < 1 ? 1 : every) {
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("csv: cannot open '" + path + "' for writing");
    file_ = f;
    const std::string h = csv_header();
    std::fwrite(h.data(), 1, h.size(), f);
}

DiagnosticsCsv::~DiagnosticsCsv() {
    if (file_) std::fclose(static_cast<FILE*>(file_));
}

void DiagnosticsCsv::on_step(const MixtureState& state, const StepDiagnostics& diag) {
    ++step_count_;
    if (step_count_ % every_ != 0) return;
    const std::string row = csv_row(state, diag, params_);
    std::fwrite(row.data(), 1, row.size(), static_cast<FILE*>(file_));
    std::fflush(static_cast<FILE*>(file_));
}

} // namespace qinsch
