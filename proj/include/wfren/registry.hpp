#pragma once

#include <string>
#include <vector>

namespace wfren {

struct SubcommandInfo {
    std::string name;
    std::vector<std::string> operations;  // module operations the subcommand drives
};

// Dispatch table of the CLI; the coverage test asserts that the union of
// per-subcommand operations equals the full operation list.
const std::vector<SubcommandInfo>& cli_registry();

const std::vector<std::string>& all_operations();

}  // namespace wfren
