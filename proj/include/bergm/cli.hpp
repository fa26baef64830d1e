#pragma once

#include <ostream>
#include <span>
#include <string>

namespace bergm::cli {

/**
 * Runs one command line (without the program name). Returns the process exit
 * code: 0 on success, 1 on invalid input or usage, 2 on numerical failure.
 * Reports go to `out`, diagnostics to `err`.
 */
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

} // namespace bergm::cli
