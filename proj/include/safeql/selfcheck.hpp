#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "safeql/matrix.hpp"
#include "safeql/riccati.hpp"

namespace safeql {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // measured values, reported on pass and fail alike
};

struct SuiteReport {
    std::vector<CheckResult> properties;  // per-module invariant checks
    std::vector<CheckResult> criteria;    // the twelve gate checks, in order
    double total_seconds = 0.0;

    bool all_passed() const;
};

/// Runs every property check and the twelve gate checks once. The final gate
/// (wall-clock budget) is judged from this very run.
SuiteReport run_suite();

/// Riccati defect predicate used by the suite; exposed so tests can feed a
/// perturbed P and watch the check trip.
bool are_residual_ok(const SystemModel& sys, const Matrix& P, double tol = 1e-8);

/// Prints one line per check to out; returns 0 when everything passed.
int run_verify(std::ostream& out);

}  // namespace safeql
