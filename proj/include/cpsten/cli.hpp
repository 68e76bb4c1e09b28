#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cpsten/errors.hpp"

namespace cps {

enum ExitCode : int { ExitOk = 0, ExitUncertified = 2, ExitInputError = 3, ExitSolverFailure = 4 };

int exit_code_for(ErrorCode code);

/// Runs one command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cps
