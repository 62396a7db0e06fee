#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace ratchet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitGuard = 3;

/// Runs the `ratchet` command line with `args` (program name excluded) and
/// returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace ratchet::cli
