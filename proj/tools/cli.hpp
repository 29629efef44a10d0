#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRefuted = 2;

/// Runs one subcommand. `args` excludes the program name. The JSON report
/// goes to `out` (or to --out); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperspec::cli
