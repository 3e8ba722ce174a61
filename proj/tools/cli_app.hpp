#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace torpid::cli {

/// Run the command-line front end. Structured output goes to `out`,
/// diagnostics to `err`. Exit codes: 0 ok, 2 guard exceeded, 3 invalid
/// input, 4 structural-property failure.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace torpid::cli
