#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qes::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kInvalidArguments = 2,
    kNotQuasiExact = 3,
    kDegenerate = 4,
    kSolverFailure = 5,
    kUnwritablePath = 6,
};

/// Runs the command line (args excludes the program name). JSON goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qes::cli
