#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shofa::cli {

// Exit codes: 0 success / first branch, 1 second branch or witness, 2 input error,
// 3 budget exceeded. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shofa::cli
