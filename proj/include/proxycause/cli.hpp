#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace proxycause::cli {

enum ExitCode : int {
    ok = 0,
    criterion_not_held = 2,
    identification_failed = 3,
    input_error = 4,
};

/// Runs one command line (without the program name). The human summary goes
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// SHA-256 over the given files' bytes, each prefixed by its length.
std::string inputs_digest(const std::vector<std::string>& paths);

}  // namespace proxycause::cli
