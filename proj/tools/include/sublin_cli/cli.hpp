#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sublin::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kInputError = 2, kInvariantError = 3 };

/// Runs one command line (argv[0] is the program name). The JSON report
/// goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace sublin::cli
