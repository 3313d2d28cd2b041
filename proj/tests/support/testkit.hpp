#pragma once

// Reference implementations for tests. Everything here is deliberately
// naive and shares no code with the library beyond Formula itself.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "sublin/cnf.hpp"
#include "sublin/oracle.hpp"

namespace sublin::testkit {

/// Formula from DIMACS-style integer clauses.
Formula cnf(Var n, std::initializer_list<std::initializer_list<int>> clauses);
Formula cnf(Var n, const std::vector<std::vector<int>>& clauses);

/// Assignment whose bit v-1 of `bits` holds x_v.
Assignment from_bits(Var n, std::uint64_t bits);

/// Clause-by-clause count, no occurrence index.
std::uint64_t naive_count(const Formula& f, const Assignment& phi);

/// Plain enumeration over all 2^n assignments.
std::uint64_t naive_opt(const Formula& f);

/// Σ over all 2^n assignments of Pr[assignment] · count, with independent
/// bits of marginal p. Exponential; n <= 12.
Rational naive_expectation(const Formula& f, const Rational& p);

/// Least-squares fit y ≈ a + b·x.
struct Fit {
  double a = 0;
  double b = 0;
  double max_rel_residual = 0;  // max_i |y_i − ŷ_i| / y_i
};
Fit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Random r-CNF in the ratio-suite shape: r ∈ {2,3}, n ∈ [4, max_n],
/// m ∈ [n, 4n]. Widths never exceed n.
Formula random_ratio_instance(std::mt19937_64& rng, Var max_n);

/// Hand cases: complementary units, all-units, single clauses.
std::vector<Formula> adversarial_cases();

/// Independent checker of the tree-decomposition axioms over explicit
/// edge lists.
bool td_axioms_hold(std::uint32_t num_vertices, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                    const std::vector<std::vector<std::uint32_t>>& bags, const std::vector<std::uint32_t>& parent);

}  // namespace sublin::testkit
