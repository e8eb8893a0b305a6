#pragma once

#include <iosfwd>

namespace lpd {

/// Exit codes: 0 success, 1 verification or solve failure, 2 usage error.
enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

/// Entry point behind the lpdolbeault binary; output goes to `out` unless
/// --out names a file, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lpd
