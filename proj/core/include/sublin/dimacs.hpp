#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sublin/cnf.hpp"

namespace sublin {

struct ParseResult {
  Formula formula;
  std::vector<std::string> warnings;
};

/// Parses DIMACS CNF. Throws InputError on a malformed header, an
/// out-of-range literal, or a tautological clause; a clause count that
/// disagrees with the header only produces a warning.
ParseResult parse_dimacs(std::string_view text);
ParseResult read_dimacs_file(const std::filesystem::path& path);

/// Writes `p cnf n m` followed by one clause per line. Each entry of
/// `comments` becomes a `c` line before the header.
std::string serialize_dimacs(const Formula& formula, const std::vector<std::string>& comments = {});

/// Solver-output convention: "v 1 -2 3 0". Unset variables are omitted.
std::string format_assignment_line(const Assignment& phi);
Assignment parse_assignment_line(std::string_view line, Var num_vars);

}  // namespace sublin
