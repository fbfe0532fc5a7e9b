#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace celliptic::cli {

inline constexpr const char *kToolName = "celliptic";
inline constexpr const char *kToolVersion = "0.1.0";

/// Runs one subcommand; `args` excludes the program name. Reports go to the
/// --out file when given, otherwise to `out`. Returns the process exit code:
/// 0 success, 1 parse error, 2 invariant violation in the inputs, 3 numerical
/// failure.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace celliptic::cli
