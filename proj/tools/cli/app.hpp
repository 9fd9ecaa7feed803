#pragma once

#include <iosfwd>

namespace isotropy::cli {

/// Parses argv and runs one subcommand. Returns the process exit code:
/// 0 success, 2 usage error, 3 data error, 4 numeric failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isotropy::cli
