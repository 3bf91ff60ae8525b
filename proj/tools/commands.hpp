#pragma once

#include <iosfwd>

namespace fieldnorm::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Entry point behind the `fieldnorm` binary. Diagnostics go to `err` as a
/// single "error: <reason>: <detail>" line.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fieldnorm::cli
