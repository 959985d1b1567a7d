#pragma once

// Command driver behind the `ttr` executable.

#include <iosfwd>

#include "ttr/config.hpp"

namespace ttr {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitInvalid = 2, kExitNoConvergence = 3 };

// Runs cfg.command, writing human or machine output to out and diagnostics to
// err. Files go under cfg.output.dir when it is set.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace ttr
