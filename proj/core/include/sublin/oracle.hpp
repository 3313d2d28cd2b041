#pragma once

// Ground truth: exhaustive Max-SAT and exact expectations.

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "sublin/cnf.hpp"

namespace sublin {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr Var kOracleMaxVars = 26;

struct ExactResult {
  std::uint64_t opt = 0;
  Assignment witness;
};

/// Maximum satisfied count over all 2^n assignments. Among optimal
/// assignments the witness is the lexicographically smallest, reading
/// x_1 first and 0 < 1. `jobs` > 1 splits the enumeration across threads;
/// the result does not depend on it. Throws InputError if n > 26.
ExactResult exact_maxsat(const Formula& formula, unsigned jobs = 1);

/// Σ_C (1 − Π_{l∈C} miss(l)) with miss(x) = 1 − p and miss(¬x) = p: the
/// expected satisfied count when each clause sees independent bits of
/// marginal p.
Rational expected_satisfied(const Formula& formula, const Rational& p);

}  // namespace sublin
