#pragma once

#include <iosfwd>

namespace diemap::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 1,
    kConfigError = 2,
    kInternalError = 3,
};

/// Parses the command line, runs the pipeline and reports errors on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace diemap::cli
