#include "sublin/hash_family.hpp"

#include <algorithm>
#include <string>

#include "sublin/errors.hpp"

namespace sublin {

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  if (x < 4) return true;
  if (x % 2 == 0 || x % 3 == 0) return false;
  for (std::uint64_t d = 5; d * d <= x; d += 6) {
    if (x % d == 0 || x % (d + 2) == 0) return false;
  }
  return true;
}

std::uint64_t smallest_prime_geq(std::uint64_t x) {
  if (x <= 2) return 2;
  std::uint64_t p = x;
  while (!is_prime(p)) ++p;
  return p;
}

void HashFamilySpec::validate() const {
  auto fail = [&](const std::string& what) {
    throw InputError("invalid hash family (n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                     ", a=" + std::to_string(a) + ", b=" + std::to_string(b) + ", q=" + std::to_string(q) +
                     "): " + what);
  };
  if (k < 1 || k > kMaxIndependence) fail("k must be in [1, " + std::to_string(kMaxIndependence) + "]");
  if (n < k) fail("need n >= k");
  if (a < 1 || b < a) fail("need b >= a >= 1");
  if (!is_prime(q)) fail("q must be prime");
  if (q < std::max(n, b)) fail("need q >= max(n, b)");
  if (q > (std::uint64_t{1} << 62)) fail("q too large");
}

std::uint64_t HashFamilySpec::threshold() const {
  const u128 num = static_cast<u128>(2) * q * a + b;
  const auto t = static_cast<std::uint64_t>(num / (static_cast<u128>(2) * b));
  return std::min(t, q);
}

std::uint64_t HashFamilySpec::family_size() const {
  u128 size = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    size *= q;
    if (size > ~std::uint64_t{0}) return 0;
  }
  return static_cast<std::uint64_t>(size);
}

HashFamilySpec make_hash_spec(std::uint64_t n, std::uint32_t k, std::uint64_t a, std::uint64_t b,
                              std::uint64_t min_q) {
  HashFamilySpec spec;
  spec.n = std::max<std::uint64_t>(n, k);
  spec.k = k;
  spec.a = a;
  spec.b = b;
  spec.q = smallest_prime_geq(std::max({spec.n, b, min_q, std::uint64_t{2}}));
  spec.validate();
  return spec;
}

Assignment assignment_from_hash(const HashFunction& f, Var num_vars) {
  Assignment phi(num_vars);
  for (Var v = 1; v <= num_vars; ++v) phi.set(v, f.bit(v));
  return phi;
}

FamilyStatistics family_statistics(const HashFamilySpec& spec) {
  const auto n = static_cast<std::size_t>(spec.n);
  FamilyStatistics stats;
  stats.ones.assign(n, 0);
  stats.both_ones.assign(n, std::vector<std::uint64_t>(n, 0));
  std::vector<std::uint8_t> bits(n);
  enum_family(spec).scan([&](const HashFunction& f) {
    ++stats.members;
    for (std::size_t i = 0; i < n; ++i) {
      bits[i] = f.bit(static_cast<Var>(i + 1)) ? 1 : 0;
      stats.ones[i] += bits[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!bits[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) stats.both_ones[i][j] += bits[j];
    }
  });
  return stats;
}

}  // namespace sublin
