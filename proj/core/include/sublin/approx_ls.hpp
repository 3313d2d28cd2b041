#pragma once

// The folklore 1/2-approximation and the Lieberherr-Specker 0.618
// algorithm, implemented over restartable streams.
//
// to_two_satisfiable rewrites F into a formula F' whose unit clauses are all
// positive (hence no complementary unit pair). For each variable x let a be
// the number of unit clauses (x) and b the number of unit clauses (¬x).
// x is *flipped* when b > a: every literal over x is negated, the (¬x) units
// become (x) units emitted after the #NEG marker, and the (x) units are
// dropped. Otherwise the (x) units are kept and the (¬x) units dropped.
// Each dropped unit pairs with a distinct kept complementary unit and at
// most one clause of a pair can hold, so OPT(F) <= m'. Every assignment
// satisfies at least as many clauses of F as of F'.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>

#include "sublin/cnf.hpp"
#include "sublin/errors.hpp"
#include "sublin/hash_family.hpp"
#include "sublin/stream.hpp"

namespace sublin {

struct UnitCounts {
  std::uint32_t positive = 0;
  std::uint32_t negative = 0;
};

/// Stateless view deciding, from the read-only formula, how each literal and
/// unit clause is treated by the 2-satisfiable transform.
class TwoSatTransform {
 public:
  explicit TwoSatTransform(const Formula& formula) : formula_(&formula) {}

  const Formula& formula() const { return *formula_; }
  UnitCounts unit_counts(Var var) const;
  bool flipped(Var var) const {
    const UnitCounts u = unit_counts(var);
    return u.negative > u.positive;
  }
  Literal map(Literal lit) const { return flipped(lit.var()) ? lit.negated() : lit; }
  /// Unit clause j is dropped because a complementary unit of the
  /// majority polarity is kept.
  bool dropped_unit(ClauseIndex j) const;

 private:
  const Formula* formula_;
};

/// Item of the transformed stream: either a clause of F' (a clause of F seen
/// through the literal mapping) or the #NEG marker.
struct TwoSatItem {
  enum class Kind { clause, neg_marker };
  Kind kind = Kind::clause;
  ClauseIndex origin = 0;  // index of the source clause in F
  std::span<const Literal> source;
  const TwoSatTransform* transform = nullptr;

  std::size_t width() const { return source.size(); }
  Literal literal(std::size_t i) const { return transform->map(source[i]); }
  template <class BitFn>
  bool satisfied_by(BitFn&& bit) const {
    for (std::size_t i = 0; i < source.size(); ++i) {
      const Literal lit = literal(i);
      if (lit.holds(bit(lit.var()))) return true;
    }
    return false;
  }
};

/// Stream of F': non-unit clauses, then kept positive units, then #NEG, then
/// the units of flipped variables (already mapped to positive literals).
/// The transform object must outlive the stream.
inline auto to_two_satisfiable(const TwoSatTransform& transform) {
  return make_stream<TwoSatItem>("two-sat", StreamKind::clause, [&transform](auto&& emit) {
    ScopedCells state(3);
    const Formula& f = transform.formula();
    const auto m = static_cast<ClauseIndex>(f.num_clauses());
    TwoSatItem item;
    item.transform = &transform;
    for (ClauseIndex j = 0; j < m; ++j) {
      if (f.width(j) < 2) continue;
      item.origin = j;
      item.source = f.clause(j);
      if (!emit(item)) return;
    }
    for (ClauseIndex j = 0; j < m; ++j) {
      if (f.width(j) != 1 || f.clause(j)[0].negative() || transform.dropped_unit(j)) continue;
      item.origin = j;
      item.source = f.clause(j);
      if (!emit(item)) return;
    }
    TwoSatItem marker;
    marker.kind = TwoSatItem::Kind::neg_marker;
    marker.transform = &transform;
    if (!emit(marker)) return;
    for (ClauseIndex j = 0; j < m; ++j) {
      if (f.width(j) != 1 || !f.clause(j)[0].negative() || transform.dropped_unit(j)) continue;
      item.origin = j;
      item.source = f.clause(j);
      if (!emit(item)) return;
    }
  });
}

struct HalfApproxResult {
  Assignment assignment;
  std::uint64_t satisfied = 0;
  bool all_ones = true;
};

/// Better of all-1s / all-0s; ties go to all-1s.
HalfApproxResult half_approx(const Formula& formula);

struct LsSearchResult {
  Assignment assignment;  // over F' variables
  std::uint64_t satisfied = 0;
  std::uint64_t threshold = 0;  // least count exceeding 0.618 m'
  std::uint64_t target = 0;     // threshold actually searched for
  std::uint64_t family_index = 0;
  std::uint64_t candidates = 0;
  std::uint64_t q = 0;
  std::uint64_t t = 0;
  bool fallback = false;  // returned count is below `threshold`
};

/// Scans Univ(n, 2, 618, 1000) for the first member satisfying more than
/// 0.618 m' clauses of the stream. When rounding of the marginal leaves the
/// family average below that line, the target drops to the ceiling of a
/// lower bound on the family average, which some member always reaches.
template <class TwoSatStream>
LsSearchResult ls_search(const TwoSatStream& stream, std::uint64_t m_prime, Var num_vars,
                         std::uint32_t max_width) {
  LsSearchResult result;
  result.threshold = m_prime * 618 / 1000 + 1;
  if (num_vars == 0) {
    result.target = 0;
    result.fallback = m_prime > 0;
    return result;
  }
  const std::uint64_t min_q = 20 * std::max<std::uint64_t>(m_prime, 1) * std::max<std::uint32_t>(max_width, 1);
  const HashFamilySpec spec = make_hash_spec(num_vars, 2, 618, 1000, min_q);
  ScopedCells state(8);
  result.q = spec.q;
  result.t = spec.threshold();

  // Pairwise-exact lower bound on the family mean: a clause is at least as
  // likely satisfied as the disjunction of its first two literals.
  const long double p = static_cast<long double>(result.t) / static_cast<long double>(result.q);
  long double mean = 0;
  stream.scan([&](const TwoSatItem& item) {
    if (item.kind != TwoSatItem::Kind::clause) return;
    auto miss = [&](Literal lit) { return lit.negative() ? p : 1 - p; };
    if (item.width() == 1) {
      mean += 1 - miss(item.literal(0));
    } else {
      mean += 1 - miss(item.literal(0)) * miss(item.literal(1));
    }
  });
  const auto reachable = static_cast<std::uint64_t>(std::ceil(std::max<long double>(mean - 1e-6L, 0)));
  result.target = std::min(result.threshold, reachable);

  HashFunction found;
  bool have = false;
  enum_family(spec).scan([&](const HashFunction& f) {
    ++result.candidates;
    std::uint64_t count = 0;
    stream.scan([&](const TwoSatItem& item) {
      if (item.kind == TwoSatItem::Kind::clause && item.satisfied_by([&](Var v) { return f.bit(v); })) ++count;
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
  result.fallback = result.satisfied < result.threshold;
  result.assignment = assignment_from_hash(found, num_vars);
  return result;
}

struct LsResult {
  Assignment assignment;
  std::uint64_t satisfied = 0;
  std::uint64_t m_prime = 0;
  std::uint64_t flipped_vars = 0;
  LsSearchResult search;
};

/// 0.618-approximation: transform, search the hash family, map back.
LsResult ls_solve(const Formula& formula);

}  // namespace sublin

