#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace jcm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadArgs = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitCheckFailed = 4;

// Runs one invocation; args excludes the program name.  Thread-safe: sweeps
// call it concurrently.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jcm::cli
