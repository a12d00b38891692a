#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nrgen/errors.hpp"

namespace nrgen::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { ok = 0, usage = 2, validation = 3, exhausted = 4, internal = 5 };

int exit_code(ErrorClass cls);

/// Runs one invocation. `args` excludes the program name. Output goes to
/// `out`; diagnostics go to `err` as `error[<class>]: <message>` (or a JSON
/// object under --json).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nrgen::cli
