#pragma once

#include <string>
#include <vector>

namespace rbfn::cli {

// Entry point for the rbfn tool. Parses argv, dispatches to the subcommand
// and maps failures to exit codes: 0 success, 1 validation/training error,
// 2 I/O error.
int run(int argc, const char* const* argv);

// Same, for in-process callers; args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace rbfn::cli
