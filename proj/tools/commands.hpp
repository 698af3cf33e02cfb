#pragma once

#include <iosfwd>

namespace diagbound::cli {

// Exit codes
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNodeCap = 2;
inline constexpr int kViolation = 3;

/// Parses argv and runs one subcommand:
/// generate, sample-case, solve, exact, compare, check.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace diagbound::cli
