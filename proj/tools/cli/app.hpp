#pragma once

#include <ostream>

namespace ptscatter::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // selftest failures, unexpected errors
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitIo = 4;

// Full command-line entry point: parses, dispatches, maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptscatter::cli
