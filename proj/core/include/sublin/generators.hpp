#pragma once

// Instances whose incidence graph is planar by construction, and random
// r-CNF for the ratio corpus.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "sublin/cnf.hpp"

namespace sublin {

enum class PlanarKind { chain, grid, tree };

PlanarKind parse_planar_kind(std::string_view name);
std::string_view to_string(PlanarKind kind);

struct PlanarOptions {
  PlanarKind kind = PlanarKind::chain;
  std::uint32_t width = 8;   // chain/tree: variable count; grid: columns
  std::uint32_t height = 1;  // grid rows
  std::uint64_t seed = 1;
  bool all_positive = false;  // otherwise each literal's sign is drawn from the seed
  bool extras = true;         // grid/tree: pendant units and in-face 3-clauses
};

struct GeneratedInstance {
  Formula formula;
  std::string certificate;  // why the incidence graph is planar
};

/// chain: (x_i ∨ x_{i+1}) for i < n, a path.
/// grid: one 2-clause per grid edge (a subdivided grid), plus, with
///   extras, a 3-clause inside some faces on three of its corners and some
///   pendant unit clauses.
/// tree: (x_p(i) ∨ x_i) for a random parent p(i) < i, plus pendant units.
GeneratedInstance gen_planar_instance(const PlanarOptions& options);

/// Parses "8" or "5x5".
void parse_size(std::string_view text, std::uint32_t& width, std::uint32_t& height);

/// Uniform random r-CNF: each clause has `width` distinct variables with
/// random signs.
Formula random_cnf(Var n, std::uint32_t m, std::uint32_t width, std::mt19937_64& rng);

/// Uniform draw from [0, bound) using only the engine's raw output, so
/// streams are identical across standard libraries.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return bound == 0 ? 0 : rng() % bound; }

}  // namespace sublin
