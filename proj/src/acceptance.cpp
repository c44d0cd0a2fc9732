#include "wfren/acceptance.hpp"

#include <algorithm>
#include <cstdio>

namespace wfren::acceptance {

std::vector<CheckResult> run_suite(const SuiteOptions& opts) {
    (void)opts;
    return {};
}

bool report(const std::vector<CheckResult>& results) {
    bool all = true;
    for (const auto& r : results) {
        std::printf("%s %s: %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str(), r.seconds);
        all = all && r.pass;
    }
    std::printf("%s: %zu/%zu criteria passed\n", all ? "OK" : "FAILURES",
                static_cast<std::size_t>(std::count_if(results.begin(), results.end(),
                                                       [](const CheckResult& r) { return r.pass; })),
                results.size());
    return all;
}

}  // namespace wfren::acceptance
