// Gate runner: one line per criterion, nonzero exit if anything fails.
#include <cstdio>
#include <iostream>

#include "safeql/selfcheck.hpp"

int main() {
    const safeql::SuiteReport report = safeql::run_suite();

    std::size_t idx = 0;
    for (const auto& c : report.criteria) {
        ++idx;
        std::printf("criterion %2zu: %s  %s", idx, c.pass ? "PASS" : "FAIL",
                    c.name.c_str());
        if (!c.detail.empty()) std::printf("  [%s]", c.detail.c_str());
        std::printf("\n");
    }

    bool property_failure = false;
    for (const auto& p : report.properties) {
        if (p.pass) continue;
        if (!property_failure) std::printf("-- property failures --\n");
        property_failure = true;
        std::printf("property: FAIL  %s", p.name.c_str());
        if (!p.detail.empty()) std::printf("  [%s]", p.detail.c_str());
        std::printf("\n");
    }

    std::printf("suite time: %.2f s\n", report.total_seconds);
    return report.all_passed() ? 0 : 1;
}
