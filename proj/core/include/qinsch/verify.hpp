#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qinsch/relent.hpp"

namespace qinsch {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifySummary {
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

/// Backward-Euler order study on the phi/mu subsystem (u = 0, matched
/// density) with the forcing that makes exp(-t) cos(x1) the exact solution.
struct ManufacturedResult {
    std::vector<double> dts;
    std::vector<double> errors;  ///< L2 error at t_end per dt
    double order = 0.0;          ///< log-log least-squares slope
};
ManufacturedResult manufactured_order_study(const std::vector<double>& dts, int n = 32,
                                            double t_end = 0.5);

/// The verification suites. The fast set covers spectral exactness, the
/// discrete energy inequality, conservation, the divergence constraint, the
/// alpha = 0 reduction, the phi bound and CSV determinism; `full` adds the
/// manufactured-solution order study and the alpha-sweep rate experiment
/// with its uniform-regularity companion.
VerifySummary run_verification(bool full);

/// One line per check: [PASS]/[FAIL] name: detail (time).
void print_verification(const VerifySummary& summary, std::ostream& out);

} // namespace qinsch
