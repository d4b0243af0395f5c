#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hsf::cli {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // budget or convergence failure
inline constexpr int kExitUsage = 2;

/// Runs the hsf command line; args excludes the program name. Results go to
/// `out` (or to --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace hsf::cli
