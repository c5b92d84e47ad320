#pragma once

#include <ostream>

namespace consensus::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kDisconnected = 2;
inline constexpr int kStepTooLarge = 3;
inline constexpr int kNoSignChange = 4;
inline constexpr int kCrosscheckFailed = 5;

/// Entry point of `consensus-delay`; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace consensus::cli
