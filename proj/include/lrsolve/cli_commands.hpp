#pragma once

// Command-line surface.  Subcommands: check-algebra, solve, volkov,
// oracle-only, report-merge.  Exit codes: 0 all checks pass, 1 at least one
// check failed, 2 usage or configuration error.

namespace lrsolve::cli {

int run_cli(int argc, const char* const* argv);

}  // namespace lrsolve::cli
