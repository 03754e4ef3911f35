// ============================================================================
// cli.hpp
//
// The command-line front door as a callable function, so tests can run full
// invocations in-process and compare output streams byte for byte.
// ============================================================================
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rearrkit {

// `args` excludes the program name. Human-readable summary goes to `out`,
// errors to `err`; machine tables are written to the --out path when given.
// Returns the process exit code: 0 success (verify: all rows pass), 1 failed
// check or inequality, 2 usage or configuration errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rearrkit
