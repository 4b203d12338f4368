// Acceptance gate runner: every criterion at its stated tolerance, one
// pass/fail line each, nonzero exit when any fails.
#include <iostream>

#include "qinsch/verify.hpp"

int main() {
    const qinsch::VerifySummary summary = qinsch::run_verification(/*full=*/true);
    qinsch::print_verification(summary, std::cout);
    return summary.all_pass() ? 0 : 1;
}
