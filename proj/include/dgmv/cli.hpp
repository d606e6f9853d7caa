#pragma once

#include <string>
#include <vector>

namespace dgmv::cli {

/// Batch entry point. Subcommands: solve, frontier, hedge, validate.
/// Exit codes: 0 success, 2 config/validation error, 3 solver error,
/// 4 I/O error.
int run(const std::vector<std::string>& args);

int run(int argc, char** argv);

}  // namespace dgmv::cli
