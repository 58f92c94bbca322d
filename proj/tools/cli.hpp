#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace photocount::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitThreshold = 3;
inline constexpr int kExitConvergence = 4;

// Runs one command line (args excludes the program name). Data goes to
// `out` unless --out names a file; warnings and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace photocount::cli
