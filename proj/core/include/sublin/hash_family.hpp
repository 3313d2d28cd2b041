#pragma once

// Enumerable k-universal families of {0,1}-valued functions on [n].
//
// A member is a polynomial of degree < k over GF(q), evaluated at the point
// i for variable i and thresholded: bit(i) = [poly(i) < t]. Any k distinct
// points get jointly uniform evaluations over GF(q)^k, so the bits are
// k-wise independent with marginal exactly t/q. The threshold is
// t = round(q * a / b), which puts the marginal within 1/(2q) of a/b.

#include <array>
#include <cstdint>

#include "sublin/cnf.hpp"
#include "sublin/stream.hpp"

namespace sublin {

__extension__ using u128 = unsigned __int128;

inline constexpr std::uint32_t kMaxIndependence = 32;

bool is_prime(std::uint64_t x);

/// Least prime >= x (x >= 2).
std::uint64_t smallest_prime_geq(std::uint64_t x);

struct HashFamilySpec {
  std::uint64_t n = 1;  // domain size
  std::uint32_t k = 1;  // independence order
  std::uint64_t a = 1;  // target marginal numerator
  std::uint64_t b = 1;  // target marginal denominator
  std::uint64_t q = 2;  // prime field size

  /// Throws InputError unless n >= k >= 1, b >= a >= 1, q prime, q >= max(n, b).
  void validate() const;
  /// round(q * a / b)
  std::uint64_t threshold() const;
  /// q^k, or 0 if it does not fit in 64 bits.
  std::uint64_t family_size() const;
};

/// Builds a spec with q = smallest_prime_geq(max(n, b, min_q)).
HashFamilySpec make_hash_spec(std::uint64_t n, std::uint32_t k, std::uint64_t a, std::uint64_t b,
                              std::uint64_t min_q = 2);

/// One family member. Coefficients are stored highest degree first.
class HashFunction {
 public:
  HashFunction() = default;
  HashFunction(std::uint32_t k, std::uint64_t q, std::uint64_t t) : k_(k), q_(q), t_(t) {}

  std::uint32_t k() const { return k_; }
  std::uint64_t q() const { return q_; }
  std::uint64_t threshold() const { return t_; }
  std::uint64_t coeff(std::uint32_t i) const { return coeffs_[i]; }
  void set_coeff(std::uint32_t i, std::uint64_t c) { coeffs_[i] = c; }

  /// Position of this member in lexicographic enumeration order.
  std::uint64_t index() const { return index_; }
  void set_index(std::uint64_t index) { index_ = index; }

  std::uint64_t eval(std::uint64_t point) const {
    const std::uint64_t x = point % q_;
    u128 acc = 0;
    for (std::uint32_t i = 0; i < k_; ++i) acc = (acc * x + coeffs_[i]) % q_;
    return static_cast<std::uint64_t>(acc);
  }
  bool bit(Var var) const { return eval(var) < t_; }

 private:
  std::uint32_t k_ = 1;
  std::uint64_t q_ = 2;
  std::uint64_t t_ = 0;
  std::uint64_t index_ = 0;
  std::array<std::uint64_t, kMaxIndependence> coeffs_{};
};

/// Streams all q^k members in lexicographic coefficient order, starting at
/// the all-zero polynomial.
inline auto enum_family(const HashFamilySpec& spec) {
  spec.validate();
  return make_stream<HashFunction>(
      "hash-family", StreamKind::function, [spec](auto&& emit) {
        ScopedCells state(spec.k + 4);
        HashFunction f(spec.k, spec.q, spec.threshold());
        std::uint64_t index = 0;
        while (true) {
          f.set_index(index++);
          if (!emit(f)) return;
          std::int64_t pos = static_cast<std::int64_t>(spec.k) - 1;
          while (pos >= 0) {
            const auto i = static_cast<std::uint32_t>(pos);
            if (f.coeff(i) + 1 < spec.q) {
              f.set_coeff(i, f.coeff(i) + 1);
              break;
            }
            f.set_coeff(i, 0);
            --pos;
          }
          if (pos < 0) return;
        }
      });
}

/// Total assignment with values(i) = bit_f(i).
Assignment assignment_from_hash(const HashFunction& f, Var num_vars);

/// Exhaustive marginal and pairwise statistics over the whole family; used
/// for auditing small families.
struct FamilyStatistics {
  std::uint64_t members = 0;
  std::vector<std::uint64_t> ones;                   // ones[i-1] = #members with bit(i) = 1
  std::vector<std::vector<std::uint64_t>> both_ones;  // both_ones[i-1][j-1] for i < j
};
FamilyStatistics family_statistics(const HashFamilySpec& spec);

}  // namespace sublin
