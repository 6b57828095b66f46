#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twmc {

enum ExitCode { kExitOk = 0, kExitError = 1, kExitUnsat = 2, kExitUnderdetermined = 3 };

/// Entry point of the twmc tool. args excludes the program name. Results go
/// to out only when the command succeeds; diagnostics go to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twmc
