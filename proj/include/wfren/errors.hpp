#pragma once

#include <stdexcept>

namespace wfren {

// Parameter violations map to CLI exit code 2, numerical guards to exit 3.
struct NumericalGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wfren
