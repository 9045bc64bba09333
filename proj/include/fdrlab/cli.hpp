#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fdrlab::cli {

enum ExitCode : int { ok = 0, usage = 1, data = 2, io = 3 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fdrlab::cli
