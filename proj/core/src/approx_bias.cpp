#include "sublin/approx_bias.hpp"

#include <limits>
#include <string>

namespace sublin {

namespace {

void check_scale(std::uint32_t scale_bits) {
  if (scale_bits > kMaxBiasWidth) {
    throw InputError("clause width " + std::to_string(scale_bits) + " exceeds " + std::to_string(kMaxBiasWidth));
  }
}

}  // namespace

namespace detail {

ExactInt ceil_div(const ExactInt& num, const ExactInt& den) {
  ExactInt q = num / den;  // truncates toward zero
  if ((num % den != 0) && ((num > 0) == (den > 0))) ++q;
  return q;
}

std::int64_t clamp_to_i64(const ExactInt& v) {
  const ExactInt hi = std::numeric_limits<std::int64_t>::max();
  const ExactInt lo = std::numeric_limits<std::int64_t>::min();
  if (v > hi) return std::numeric_limits<std::int64_t>::max();
  if (v < lo) return std::numeric_limits<std::int64_t>::min();
  return v.convert_to<std::int64_t>();
}

}  // namespace detail

ExactInt scaled_bias(const Formula& formula, Var var, std::uint32_t scale_bits) {
  check_scale(scale_bits);
  ExactInt sum = 0;
  for (const Occurrence& occ : formula.occurrences(var)) {
    const ExactInt term = ExactInt(1) << (scale_bits - formula.width(occ.clause));
    if (occ.negative) {
      sum -= term;
    } else {
      sum += term;
    }
  }
  return sum;
}

bool bias_negative(const Formula& formula, Var var, std::uint32_t scale_bits) {
  const auto occ = formula.occurrences(var);
  // |sum| <= |occ| * 2^(r-1) fits in 63 bits here.
  if (scale_bits <= 32 && occ.size() < (std::size_t{1} << 30)) {
    std::int64_t sum = 0;
    for (const Occurrence& o : occ) {
      const std::int64_t term = std::int64_t{1} << (scale_bits - formula.width(o.clause));
      sum += o.negative ? -term : term;
    }
    return sum < 0;
  }
  return scaled_bias(formula, var, scale_bits) < 0;
}

BiasTotals bias_totals(const Formula& formula) {
  BiasTotals totals;
  totals.scale_bits = formula.max_width();
  totals.m = formula.num_clauses();
  check_scale(totals.scale_bits);
  ScopedCells state(12);
  const std::uint32_t r = totals.scale_bits;
  for (Var v = 1; v <= formula.num_vars(); ++v) {
    const ExactInt b = scaled_bias(formula, v, r);
    totals.b_f += b < 0 ? ExactInt(-b) : b;
    meter::tick();
  }
  const auto m = static_cast<ClauseIndex>(formula.num_clauses());
  for (ClauseIndex j = 0; j < m; ++j) {
    const std::uint32_t i = formula.width(j);
    const ExactInt pow_i = ExactInt(1) << i;
    const ExactInt unit = ExactInt(1) << (r - i);  // 2^(r-i)
    totals.b_star += 4 * (pow_i - i - 1) * unit;
    totals.random_sum += (pow_i - 1) * unit;
    totals.ones_sum += i * unit;
    meter::tick();
  }
  return totals;
}

BiasProfile bias_profile(const Formula& formula) {
  BiasProfile profile;
  profile.totals = bias_totals(formula);
  profile.histogram = clause_histogram(formula);
  profile.per_var.reserve(formula.num_vars());
  for (Var v = 1; v <= formula.num_vars(); ++v) {
    profile.per_var.push_back(scaled_bias(formula, v, profile.totals.scale_bits));
    if (profile.per_var.back() < 0) profile.neg_vars.push_back(v);
  }
  return profile;
}

std::string dyadic_to_decimal(const ExactInt& value, std::uint32_t scale_bits) {
  const bool negative = value < 0;
  ExactInt mag = negative ? ExactInt(-value) : value;
  const ExactInt one = ExactInt(1) << scale_bits;
  const ExactInt whole = mag / one;
  ExactInt frac = mag % one;
  std::string out = negative ? "-" : "";
  out += whole.str();
  if (frac != 0) {
    out += '.';
    while (frac != 0) {
      frac *= 10;
      out += static_cast<char>('0' + (frac / one).convert_to<int>());
      frac %= one;
    }
  }
  return out;
}

ChouResult chou_solve(const Formula& formula) {
  ChouResult result;
  result.totals = bias_totals(formula);
  const NegativeBiasSet neg(formula, result.totals.scale_bits);
  const auto stream = to_positively_biased(formula, neg);
  ScopedCells state(4);

  Assignment phi;
  if (result.totals.b_f > result.totals.b_star) {
    result.bias_branch = true;
    phi = Assignment::constant(formula.num_vars(), true);
  } else {
    result.search = chou_search(stream, result.totals, formula.num_vars());
    phi = result.search.assignment;
  }
  result.assignment = Assignment(formula.num_vars());
  for (Var v = 1; v <= formula.num_vars(); ++v) {
    const bool flipped = neg.contains(v);
    result.flipped_vars += flipped ? 1 : 0;
    result.assignment.set(v, phi.value(v) != flipped);
  }
  result.satisfied = eval_assignment(formula, result.assignment);
  return result;
}

}  // namespace sublin
