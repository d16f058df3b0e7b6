#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace efg {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the efgame command line; args excludes the program name.
/// Returns 0 on success, 1 on a verification failure, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace efg
