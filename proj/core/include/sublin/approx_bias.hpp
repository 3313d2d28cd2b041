#pragma once

// Bias-based (√2/2)-approximation for MaxSAT with clause width <= r.
//
// bias(x) = Σ_j (P_j(x) − N_j(x)) / 2^j, where P_j / N_j count width-j
// clauses containing x / ¬x. All bias quantities are dyadic with
// denominator 2^r, so they are carried as exact integers scaled by 2^r.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sublin/cnf.hpp"
#include "sublin/errors.hpp"
#include "sublin/hash_family.hpp"
#include "sublin/stream.hpp"

namespace sublin {

using ExactInt = boost::multiprecision::checked_int256_t;

/// Largest clause width for which the scaled quantities are guaranteed to
/// fit ExactInt.
inline constexpr std::uint32_t kMaxBiasWidth = 64;

/// bias(x) * 2^scale_bits.
ExactInt scaled_bias(const Formula& formula, Var var, std::uint32_t scale_bits);

/// Sign test of bias(x) without wide arithmetic when the scale allows it.
bool bias_negative(const Formula& formula, Var var, std::uint32_t scale_bits);

/// Formula-level sums, all scaled by 2^scale_bits.
struct BiasTotals {
  std::uint32_t scale_bits = 0;  // r
  std::uint64_t m = 0;
  ExactInt b_f = 0;         // Σ |bias(x)|
  ExactInt b_star = 0;      // 4 Σ_i (1 − (i+1)/2^i) m_i
  ExactInt random_sum = 0;  // Σ_i (1 − 1/2^i) m_i
  ExactInt ones_sum = 0;    // Σ_i i m_i / 2^i
};

/// Streaming computation in O(1) auxiliary cells.
BiasTotals bias_totals(const Formula& formula);

struct BiasProfile {
  BiasTotals totals;
  std::vector<ExactInt> per_var;  // per_var[x-1] = bias(x) * 2^r
  std::map<std::uint32_t, std::uint64_t> histogram;
  std::vector<Var> neg_vars;  // ascending
};

/// Materialized profile (reporting and tests).
BiasProfile bias_profile(const Formula& formula);

/// Decimal rendering of value / 2^scale_bits (exact: dyadic fractions
/// terminate).
std::string dyadic_to_decimal(const ExactInt& value, std::uint32_t scale_bits);

/// Set of variables whose bias is negative, decided on demand from the
/// read-only formula.
class NegativeBiasSet {
 public:
  NegativeBiasSet(const Formula& formula, std::uint32_t scale_bits)
      : formula_(&formula), scale_bits_(scale_bits) {}
  bool contains(Var var) const { return bias_negative(*formula_, var, scale_bits_); }

 private:
  const Formula* formula_;
  std::uint32_t scale_bits_;
};

/// Explicit ascending variable list.
class ExplicitVarSet {
 public:
  explicit ExplicitVarSet(std::span<const Var> vars) : vars_(vars) {}
  bool contains(Var var) const { return std::binary_search(vars_.begin(), vars_.end(), var); }

 private:
  std::span<const Var> vars_;
};

/// A clause of F seen with the literals of flipped variables negated.
template <class FlipSet>
struct FlippedClause {
  ClauseIndex origin = 0;
  std::span<const Literal> source;
  const FlipSet* flips = nullptr;

  std::size_t width() const { return source.size(); }
  Literal literal(std::size_t i) const {
    return flips->contains(source[i].var()) ? source[i].negated() : source[i];
  }
  template <class BitFn>
  bool satisfied_by(BitFn&& bit) const {
    for (std::size_t i = 0; i < source.size(); ++i) {
      const Literal lit = literal(i);
      if (lit.holds(bit(lit.var()))) return true;
    }
    return false;
  }
  bool has_positive() const {
    for (std::size_t i = 0; i < source.size(); ++i)
      if (!literal(i).negative()) return true;
    return false;
  }
};

/// F with every literal over a variable in `flips` negated, clause by
/// clause. `flips` must outlive the stream.
template <class FlipSet>
auto to_positively_biased(const Formula& formula, const FlipSet& flips) {
  return make_stream<FlippedClause<FlipSet>>(
      "positively-biased", StreamKind::clause, [&formula, &flips](auto&& emit) {
        ScopedCells state(2);
        FlippedClause<FlipSet> item;
        item.flips = &flips;
        const auto m = static_cast<ClauseIndex>(formula.num_clauses());
        for (ClauseIndex j = 0; j < m; ++j) {
          item.origin = j;
          item.source = formula.clause(j);
          if (!emit(item)) return;
        }
      });
}

struct ChouSearchResult {
  Assignment assignment;  // over F' variables
  std::uint64_t satisfied = 0;
  bool degenerate = false;  // 2m − 4 b_F <= 0: all-1s without search
  bool all_ones_won = false;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t q = 0;
  std::uint64_t t = 0;
  std::int64_t expectation_target = 0;  // ⌈Σ(1−1/2^i)m_i + b_F²/(4b*)⌉
  std::int64_t slack_target = 0;        // same, less m r / (2q)
  std::uint64_t target = 0;             // threshold actually searched for
  std::uint64_t family_index = 0;
  std::uint64_t candidates = 0;
  bool fallback = false;  // satisfied < slack_target
};

namespace detail {
ExactInt ceil_div(const ExactInt& num, const ExactInt& den);
std::int64_t clamp_to_i64(const ExactInt& v);
}  // namespace detail

/// Searches Univ(n, r, ⌈m − b_F⌉, ⌈2m − 4b_F⌉) for the first member whose
/// count reaches the expectation target less the rounding slack. The target
/// is capped by the ceiling of the family mean so the scan always ends.
template <class ClauseStream>
ChouSearchResult chou_search(const ClauseStream& stream, const BiasTotals& totals, Var num_vars) {
  ChouSearchResult result;
  ScopedCells state(16);
  const std::uint32_t r = totals.scale_bits;
  const std::uint64_t m = totals.m;
  const ExactInt one = ExactInt(1) << r;

  std::uint64_t all_ones = 0;
  stream.scan([&](const auto& clause) { all_ones += clause.has_positive() ? 1 : 0; });

  const ExactInt den_scaled = 2 * m * one - 4 * totals.b_f;
  if (num_vars == 0 || m == 0 || den_scaled <= 0) {
    result.degenerate = true;
    result.assignment = Assignment::constant(num_vars, true);
    result.satisfied = all_ones;
    result.all_ones_won = true;
    return result;
  }
  if (r > kMaxIndependence) {
    throw InputError("clause width " + std::to_string(r) + " exceeds the supported independence order " +
                     std::to_string(kMaxIndependence));
  }
  const ExactInt a_exact = detail::ceil_div(m * one - totals.b_f, one);
  const ExactInt b_exact = detail::ceil_div(den_scaled, one);
  result.b = b_exact.convert_to<std::uint64_t>();
  result.a = std::clamp<std::uint64_t>(a_exact <= 0 ? 1 : a_exact.convert_to<std::uint64_t>(), 1, result.b);

  const HashFamilySpec spec = make_hash_spec(num_vars, r, result.a, result.b, 20 * m * r);
  result.q = spec.q;
  result.t = spec.threshold();

  // Expectation target, with and without the rounding slack m r / (2q).
  {
    const ExactInt q2 = 2 * ExactInt(spec.q);
    ExactInt num;
    ExactInt den;
    ExactInt num_mean;
    ExactInt den_mean;
    if (totals.b_star > 0) {
      den_mean = one * 4 * totals.b_star;
      num_mean = totals.random_sum * 4 * totals.b_star + totals.b_f * totals.b_f;
      den = den_mean * q2;
      num = num_mean * q2 - ExactInt(m) * r * den_mean;
    } else {
      den_mean = one;
      num_mean = totals.random_sum;
      den = den_mean * q2;
      num = num_mean * q2 - ExactInt(m) * r * one;
    }
    result.expectation_target = detail::clamp_to_i64(detail::ceil_div(num_mean, den_mean));
    result.slack_target = detail::clamp_to_i64(detail::ceil_div(num, den));
  }

  // The family mean is exact: clause widths never exceed the independence
  // order, so each clause sees fully independent bits of marginal t/q.
  const long double p = static_cast<long double>(result.t) / static_cast<long double>(result.q);
  long double mean = 0;
  stream.scan([&](const auto& clause) {
    long double miss = 1;
    for (std::size_t i = 0; i < clause.width(); ++i) miss *= clause.literal(i).negative() ? p : 1 - p;
    mean += 1 - miss;
  });
  const auto reachable = static_cast<std::uint64_t>(std::ceil(std::max<long double>(mean - 1e-6L, 0)));
  result.target = std::min<std::uint64_t>(
      static_cast<std::uint64_t>(std::max<std::int64_t>(result.slack_target, 0)), reachable);

  HashFunction found;
  bool have = false;
  enum_family(spec).scan([&](const HashFunction& f) {
    ++result.candidates;
    std::uint64_t count = 0;
    stream.scan([&](const auto& clause) {
      if (clause.satisfied_by([&](Var v) { return f.bit(v); })) ++count;
    });
    if (count >= result.target) {
      found = f;
      result.satisfied = count;
      have = true;
      return false;
    }
    return true;
  });
  if (!have) throw InvariantError("hash family exhausted below its own mean");
  result.family_index = found.index();
  result.fallback = static_cast<std::int64_t>(result.satisfied) < result.slack_target;
  if (all_ones > result.satisfied) {
    result.all_ones_won = true;
    result.satisfied = all_ones;
    result.assignment = Assignment::constant(num_vars, true);
  } else {
    result.assignment = assignment_from_hash(found, num_vars);
  }
  return result;
}

struct ChouResult {
  Assignment assignment;
  std::uint64_t satisfied = 0;
  BiasTotals totals;
  bool bias_branch = false;  // b_F > b*: all-1s over F' without search
  std::uint64_t flipped_vars = 0;
  ChouSearchResult search;
};

/// (√2/2)-approximation: bias, flip to positively biased, branch or search,
/// flip back.
ChouResult chou_solve(const Formula& formula);

}  // namespace sublin
