#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ransomgame::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;

// Runs one command line (without the program name). Results go to `out`,
// diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Installs a stderr logger with the level from RANSOMGAME_LOG
// (trace, debug, info, warn, error, critical, off; default warn).
void configure_logging();

}  // namespace ransomgame::cli
