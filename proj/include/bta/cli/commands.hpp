#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bta/core/error.hpp"

namespace bta::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;   // diagnostics with errors
inline constexpr int kExitUsage = 2;     // usage, config and IO problems
inline constexpr int kExitDiverged = 3;  // numeric divergence in training

struct Streams {
    std::istream& in;
    std::ostream& out;  // machine-readable results only
    std::ostream& err;  // diagnostics and progress
};

// Entry point behind the `bta` binary; `args` excludes the program name.
//   tree check|fmt|to-json|from-json   run   replay   search   train task-node|scheduler
int run_cli(const std::vector<std::string>& args, Streams io);

int exit_code(const Error& e);

std::string version();

}  // namespace bta::cli
