#include <gtest/gtest.h>

#include <map>
#include <vector>

#include "sublin/errors.hpp"
#include "sublin/hash_family.hpp"

namespace sublin {
namespace {

HashFamilySpec spec_of(std::uint64_t n, std::uint32_t k, std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  HashFamilySpec s;
  s.n = n;
  s.k = k;
  s.a = a;
  s.b = b;
  s.q = q;
  return s;
}

std::vector<HashFunction> all_members(const HashFamilySpec& s) {
  std::vector<HashFunction> out;
  enum_family(s).scan([&](const HashFunction& f) { out.push_back(f); });
  return out;
}

TEST(Primes, SmallestPrimeGeq) {
  EXPECT_EQ(smallest_prime_geq(4), 5u);
  EXPECT_EQ(smallest_prime_geq(7), 7u);
  // 1001 = 7·11·13, 1003 = 17·59, 1007 = 19·53
  EXPECT_EQ(smallest_prime_geq(1000), 1009u);
  EXPECT_EQ(smallest_prime_geq(2), 2u);
}

TEST(Family, SizeAndMarginals) {
  const auto s = spec_of(3, 2, 1, 2, 5);
  EXPECT_EQ(s.threshold(), 3u);
  const auto members = all_members(s);
  ASSERT_EQ(members.size(), 25u);
  for (Var i = 1; i <= 3; ++i) {
    int ones = 0;
    for (const auto& f : members) ones += f.bit(i);
    EXPECT_EQ(ones, 15) << "variable " << i;
  }
  for (Var i = 1; i <= 3; ++i)
    for (Var j = i + 1; j <= 3; ++j) {
      int both = 0;
      for (const auto& f : members) both += f.bit(i) && f.bit(j);
      EXPECT_EQ(both, 9);
    }
}

TEST(Family, IndicesAreEnumerationOrder) {
  const auto members = all_members(spec_of(4, 2, 1, 2, 5));
  for (std::size_t i = 0; i < members.size(); ++i) {
    EXPECT_EQ(members[i].index(), i);
    EXPECT_EQ(members[i].coeff(0) * 5 + members[i].coeff(1), i);
  }
}

TEST(Family, DegreeZeroIsConstant) {
  const auto s = spec_of(4, 1, 1, 2, 7);
  const auto members = all_members(s);
  ASSERT_EQ(members.size(), 7u);
  int ones = 0;
  for (const auto& f : members) {
    const bool b = f.bit(1);
    for (Var i = 2; i <= 4; ++i) EXPECT_EQ(f.bit(i), b);
    ones += b;
  }
  EXPECT_EQ(static_cast<std::uint64_t>(ones), s.threshold());
}

TEST(Family, PairwiseUniformExhaustive) {
  for (std::uint64_t q : {5u, 7u}) {
    const auto s = spec_of(q - 1, 2, 1, 2, q);
    const auto members = all_members(s);
    for (Var i = 1; i < q; ++i)
      for (Var j = i + 1; j < q; ++j) {
        std::map<std::pair<std::uint64_t, std::uint64_t>, int> hits;
        for (const auto& f : members) ++hits[{f.eval(i), f.eval(j)}];
        EXPECT_EQ(hits.size(), q * q);
        for (auto& [pair, c] : hits) EXPECT_EQ(c, 1);
      }
  }
}

TEST(Family, MarginalWithinRounding) {
  for (std::uint64_t q : {5u, 7u, 11u}) {
    for (auto [a, b] : {std::pair{1, 2}, {618, 1000}, {2, 3}, {3, 3}}) {
      const auto s = spec_of(3, 1, a, b, q < static_cast<std::uint64_t>(b) ? smallest_prime_geq(b) : q);
      const double err = std::abs(static_cast<double>(s.threshold()) / s.q - static_cast<double>(a) / b);
      EXPECT_LE(err, 1.0 / s.q);
    }
  }
}

TEST(Family, AssignmentFromHash) {
  HashFunction zero(2, 5, 1);
  const Assignment ones = assignment_from_hash(zero, 4);
  for (Var v = 1; v <= 4; ++v) EXPECT_TRUE(ones.value(v));

  HashFunction never(2, 5, 0);
  never.set_coeff(0, 3);
  const Assignment zeros = assignment_from_hash(never, 4);
  for (Var v = 1; v <= 4; ++v) EXPECT_FALSE(zeros.value(v));

  HashFunction linear(2, 5, 3);
  linear.set_coeff(0, 1);
  linear.set_coeff(1, 0);
  const Assignment a = assignment_from_hash(linear, 4);
  EXPECT_TRUE(a.value(1));
  EXPECT_TRUE(a.value(2));
  EXPECT_FALSE(a.value(3));
  EXPECT_FALSE(a.value(4));
}

TEST(Family, Validation) {
  EXPECT_THROW(spec_of(3, 2, 1, 2, 4).validate(), InputError);  // not prime
  EXPECT_THROW(spec_of(7, 2, 1, 2, 5).validate(), InputError);  // q < n
  EXPECT_THROW(spec_of(3, 2, 3, 2, 5).validate(), InputError);  // a > b
  EXPECT_THROW(spec_of(1, 2, 1, 2, 5).validate(), InputError);  // k > n
  EXPECT_NO_THROW(spec_of(3, 2, 1, 2, 5).validate());
  EXPECT_EQ(make_hash_spec(10, 2, 618, 1000, 20).q, 1009u);
}

TEST(Family, StatisticsMatchEnumeration) {
  const auto s = spec_of(4, 2, 1, 2, 7);
  const FamilyStatistics st = family_statistics(s);
  EXPECT_EQ(st.members, 49u);
  for (auto ones : st.ones) EXPECT_EQ(ones, s.threshold() * 7);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) EXPECT_EQ(st.both_ones[i][j], s.threshold() * s.threshold());
}

}  // namespace
}  // namespace sublin
