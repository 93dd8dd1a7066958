#pragma once

#include <string>
#include <vector>

namespace prw::selfcheck {

// The verification suite behind `prw accept` and the acceptance test binary:
// ten numbered checks pairing the library against exact desk-scale oracles
// (dynamic programming, enumeration, direct linear algebra) and Monte Carlo
// agreement bands. Every tolerance is fixed here, in code.

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;
};

struct Options {
    unsigned threads = 0;           // 0 = hardware concurrency
    std::vector<int> only;          // empty = run all ten
};

CriterionResult run_criterion(int id, const Options& opts);

/// Runs the selected criteria in order; never throws on a failing check
/// (failures are reported in the results).
std::vector<CriterionResult> run_all(const Options& opts);

/// "[PASS] 3 isotropy-corollary (1.2s): ..." one line per result.
std::string format_result_line(const CriterionResult& r);

} // namespace prw::selfcheck
