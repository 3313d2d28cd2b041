#pragma once

// Exact Max-SAT by dynamic programming over a rooted tree decomposition of
// the incidence graph, and the planar (1 − ε) scheme built on it.
//
// Each clause is counted at its highest bag only (the unique node holding
// it whose parent does not). A node fixes the variables of its bag and of
// the clauses it owns that no ancestor fixed yet, trying all extensions in
// lexicographic order; children are solved independently under that
// extension. Frames live on an explicit stack; the partial assignment ψ is
// a stack of sorted (variable, value) segments, one per frame.

#include <cstdint>
#include <span>
#include <vector>

#include "sublin/cnf.hpp"
#include "sublin/planar.hpp"
#include "sublin/space.hpp"
#include "sublin/tree_decomposition.hpp"

namespace sublin {

/// A set of clauses of F and the variables they use, numbered locally as an
/// incidence graph: [0, vars) variables, [vars, vars + clauses) clauses.
class LocalInstance {
 public:
  /// `vars` ascending and containing every variable of the clauses.
  LocalInstance(const Formula& formula, std::span<const ClauseIndex> clauses, std::span<const Var> vars);
  /// All clauses and all variables of F.
  static LocalInstance whole(const Formula& formula) { return LocalInstance(formula); }

  const Formula& formula() const { return *f_; }
  std::uint32_t num_vars() const { return whole_ ? f_->num_vars() : static_cast<std::uint32_t>(vars_.size()); }
  std::uint32_t num_clauses() const {
    return whole_ ? static_cast<std::uint32_t>(f_->num_clauses()) : static_cast<std::uint32_t>(clauses_.size());
  }
  std::uint32_t num_vertices() const { return num_vars() + num_clauses(); }
  Var global_var(std::uint32_t local) const { return whole_ ? local + 1 : vars_[local]; }
  ClauseIndex global_clause(std::uint32_t local) const { return whole_ ? local : clauses_[local]; }
  /// Local index of a global variable of this instance.
  std::uint32_t local_var(Var var) const;

  /// Incidence graph with local numbering.
  Graph graph() const;

 private:
  explicit LocalInstance(const Formula& formula) : f_(&formula), whole_(true) {}

  const Formula* f_;
  bool whole_ = false;
  std::span<const ClauseIndex> clauses_;
  std::span<const Var> vars_;
};

struct DpResult {
  std::uint64_t count = 0;
  Assignment assignment;  // over all variables of F; variables outside the instance are 0
  std::uint64_t node_visits = 0;
  std::uint32_t max_free_vars = 0;
};

/// Largest number of variables a single frame may enumerate.
inline constexpr std::uint32_t kDpMaxFreeVars = 40;

/// Exact optimum of the instance's clauses. Throws InvariantError if some
/// frame would enumerate more than kDpMaxFreeVars variables or the
/// decomposition does not cover a clause's variables.
DpResult bdtw_maxsat(const TreeDecomposition& td, const LocalInstance& instance);
/// Whole formula; `td` must decompose incidence_graph(formula).
DpResult bdtw_maxsat(const TreeDecomposition& td, const Formula& formula);

struct PartStat {
  std::uint32_t clauses = 0;
  std::uint32_t vars = 0;
  std::uint32_t width = 0;  // after rebalancing
  std::uint32_t depth = 0;
  std::uint32_t nodes = 0;
  std::uint64_t optimum = 0;
  std::uint64_t node_visits = 0;
};

struct PtasResult {
  Assignment assignment;
  std::uint64_t satisfied = 0;
  std::uint32_t k = 0;
  std::uint32_t depth0 = 0;
  bool shallow = false;
  std::uint32_t chosen_residue = 0;
  std::uint64_t clause_loss = 0;
  std::uint64_t retained = 0;
  std::uint64_t parts_optimum = 0;  // Σ of per-part optima
  std::vector<PartStat, OutputAllocator<PartStat>> parts;
};

/// (1 − ε)-approximation for formulas with planar incidence graph, with
/// ε = eps_num / eps_den in (0, 1): partition with k = ⌈2/ε⌉, solve each
/// part exactly, set the remaining variables to 0.
PtasResult planar_ptas(const Formula& formula, std::uint64_t eps_num, std::uint64_t eps_den);

}  // namespace sublin
