#pragma once

#include <iosfwd>

namespace snfp::cli {

/// Runs the snfp command line. Reports go to `out`, diagnostics to `err`.
/// Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace snfp::cli
