#pragma once

#include <iosfwd>

namespace cogeval::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the executable and the tests. Default output
/// directory for `eval` comes from COGEVAL_OUT_DIR (else ".").
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cogeval::cli
