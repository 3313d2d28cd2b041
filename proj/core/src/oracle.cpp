#include "sublin/oracle.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <thread>
#include <vector>

#include "sublin/errors.hpp"

namespace sublin {

namespace {

struct Best {
  std::uint64_t opt = 0;
  std::uint64_t key = 0;  // bit (n - i) holds x_i
  bool valid = false;

  void offer(std::uint64_t count, std::uint64_t k) {
    if (!valid || count > opt || (count == opt && k < key)) {
      opt = count;
      key = k;
      valid = true;
    }
  }
};

// Enumerates every assignment whose top `fixed` key bits equal `prefix`,
// walking the remaining bits in Gray-code order.
Best enumerate_chunk(const Formula& f, unsigned fixed, std::uint64_t prefix) {
  const Var n = f.num_vars();
  const unsigned free_bits = n - fixed;
  const auto m = static_cast<ClauseIndex>(f.num_clauses());
  std::vector<std::uint32_t> true_lits(m, 0);
  const std::uint64_t start = prefix << free_bits;
  auto value_of = [&](std::uint64_t key, Var v) { return ((key >> (n - v)) & 1u) != 0; };

  std::uint64_t satisfied = 0;
  for (ClauseIndex j = 0; j < m; ++j) {
    for (Literal lit : f.clause(j)) true_lits[j] += lit.holds(value_of(start, lit.var())) ? 1 : 0;
    satisfied += true_lits[j] > 0 ? 1 : 0;
  }
  Best best;
  std::uint64_t key = start;
  best.offer(satisfied, key);
  const std::uint64_t steps = std::uint64_t{1} << free_bits;
  for (std::uint64_t i = 1; i < steps; ++i) {
    const auto bit = static_cast<unsigned>(std::countr_zero(i));
    key ^= std::uint64_t{1} << bit;
    const Var v = n - bit;
    const bool now = value_of(key, v);
    for (const Occurrence& occ : f.occurrences(v)) {
      const bool lit_true = now != occ.negative;
      auto& c = true_lits[occ.clause];
      if (lit_true) {
        if (c++ == 0) ++satisfied;
      } else {
        if (--c == 0) --satisfied;
      }
    }
    best.offer(satisfied, key);
  }
  return best;
}

}  // namespace

ExactResult exact_maxsat(const Formula& formula, unsigned jobs) {
  const Var n = formula.num_vars();
  if (n > kOracleMaxVars) {
    throw InputError("exact oracle limited to " + std::to_string(kOracleMaxVars) + " variables, got " +
                     std::to_string(n));
  }
  jobs = std::max(1u, jobs);
  unsigned fixed = 0;
  while ((1u << fixed) < jobs && fixed < n && fixed < 8) ++fixed;
  const std::uint64_t chunks = std::uint64_t{1} << fixed;

  std::vector<Best> results(chunks);
  if (jobs == 1 || chunks == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) results[c] = enumerate_chunk(formula, fixed, c);
  } else {
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        for (std::uint64_t c = w; c < chunks; c += jobs) results[c] = enumerate_chunk(formula, fixed, c);
      });
    }
    for (auto& t : workers) t.join();
  }
  Best best;
  for (const Best& b : results) best.offer(b.opt, b.key);

  ExactResult out;
  out.opt = best.opt;
  out.witness = Assignment(n);
  for (Var v = 1; v <= n; ++v) out.witness.set(v, ((best.key >> (n - v)) & 1u) != 0);
  return out;
}

Rational expected_satisfied(const Formula& formula, const Rational& p) {
  Rational total = 0;
  const Rational q = 1 - p;
  for (ClauseIndex j = 0; j < formula.num_clauses(); ++j) {
    Rational miss = 1;
    for (Literal lit : formula.clause(j)) miss *= lit.negative() ? p : q;
    total += 1 - miss;
  }
  return total;
}

}  // namespace sublin
