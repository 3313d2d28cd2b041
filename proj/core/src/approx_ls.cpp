#include "sublin/approx_ls.hpp"

namespace sublin {

UnitCounts TwoSatTransform::unit_counts(Var var) const {
  UnitCounts u;
  for (const Occurrence& occ : formula_->occurrences(var)) {
    if (formula_->width(occ.clause) != 1) continue;
    if (occ.negative) {
      ++u.negative;
    } else {
      ++u.positive;
    }
  }
  return u;
}

bool TwoSatTransform::dropped_unit(ClauseIndex j) const {
  const Literal lit = formula_->clause(j)[0];
  // The minority polarity is dropped; on a tie the negative units go.
  return flipped(lit.var()) != lit.negative();
}

HalfApproxResult half_approx(const Formula& formula) {
  ScopedCells state(3);
  std::uint64_t ones = 0;
  std::uint64_t zeros = 0;
  const auto m = static_cast<ClauseIndex>(formula.num_clauses());
  for (ClauseIndex j = 0; j < m; ++j) {
    bool pos = false;
    bool neg = false;
    for (Literal lit : formula.clause(j)) {
      (lit.negative() ? neg : pos) = true;
    }
    ones += pos ? 1 : 0;
    zeros += neg ? 1 : 0;
    meter::tick();
  }
  HalfApproxResult result;
  result.all_ones = ones >= zeros;
  result.satisfied = result.all_ones ? ones : zeros;
  result.assignment = Assignment::constant(formula.num_vars(), result.all_ones);
  return result;
}

LsResult ls_solve(const Formula& formula) {
  LsResult result;
  const TwoSatTransform transform(formula);
  const auto stream = to_two_satisfiable(transform);
  ScopedCells state(4);
  stream.scan([&](const TwoSatItem& item) {
    if (item.kind == TwoSatItem::Kind::clause) ++result.m_prime;
  });
  result.search = ls_search(stream, result.m_prime, formula.num_vars(), formula.max_width());

  // A variable is flipped exactly when one of its units follows #NEG.
  result.assignment = Assignment(formula.num_vars());
  for (Var v = 1; v <= formula.num_vars(); ++v) {
    const bool flipped = transform.flipped(v);
    result.flipped_vars += flipped ? 1 : 0;
    result.assignment.set(v, result.search.assignment.value(v) != flipped);
  }
  result.satisfied = eval_assignment(formula, result.assignment);
  return result;
}

}  // namespace sublin
