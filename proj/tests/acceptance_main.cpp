#include "wfren/acceptance.hpp"

int main() {
    const auto results = wfren::acceptance::run_suite({});
    return wfren::acceptance::report(results) ? 0 : 1;
}
