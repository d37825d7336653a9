// Command-line front end. Kept separate from main() so tests can drive it.

#pragma once

#include <iosfwd>

namespace spinent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinent::cli
