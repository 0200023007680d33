#pragma once

#include <ostream>

namespace convexform {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFail = 1, kExitInput = 2, kExitInternal = 3 };

/// Entry point of the `convexform` tool: validate, build, verify, degree, sample, trace.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace convexform
