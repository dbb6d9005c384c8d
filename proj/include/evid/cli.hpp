#pragma once

#include <ostream>
#include <span>
#include <string>

#include "evid/error.hpp"

namespace evid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// 2 for malformed input or arguments, 3 for numerical failures.
int exit_code_for(ErrorKind kind);

/// Runs one invocation. args[0] is the program name. Diagnostics go to err as
/// a single "error:<kind>: message" line.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace evid::cli
