#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smatch {

/// Runs one CLI invocation; args excludes the program name. Reports (and
/// structured error records) go to out, usage diagnostics to err.
/// Exit codes: 0 success, 1 computation error, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smatch
