#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace halfspace::cli {

/// Exit codes: 0 success, 1 certification failure, 2 usage or config error.
enum ExitCode : int { kOk = 0, kCertificationFailed = 1, kUsage = 2 };

/// Name of the environment variable holding the default output directory.
inline constexpr const char* kOutEnv = "HALFSPACE_OUT";

/// Runs one command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace halfspace::cli
