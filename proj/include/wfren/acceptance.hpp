#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wfren::acceptance {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;       // measured values and tolerances, human readable
    double measured = 0.0;    // headline measured value
    double tolerance = 0.0;   // headline tolerance
    double seconds = 0.0;
    std::string derivation;   // provenance note for pinned thresholds, if any
};

struct SuiteOptions {
    std::uint64_t seed = 20240801;
    bool quick = false;  // closed-form subset only
};

// Runs the acceptance criteria (all, or the quick closed-form subset) and
// returns one result per criterion, in order.
std::vector<CheckResult> run_suite(const SuiteOptions& opts);

// Prints "PASS ..."/"FAIL ..." lines to stdout; returns true if all passed.
bool report(const std::vector<CheckResult>& results);

}  // namespace wfren::acceptance
