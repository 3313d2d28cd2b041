#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sublin/space.hpp"

namespace sublin {

using Var = std::uint32_t;  // 1-based variable index
using ClauseIndex = std::uint32_t;
using Vertex = std::uint32_t;

/// A variable or its negation, packed as (var << 1) | negative.
class Literal {
 public:
  constexpr Literal() = default;
  constexpr Literal(Var var, bool negative) : code_((var << 1) | (negative ? 1u : 0u)) {}

  static constexpr Literal from_dimacs(std::int64_t lit) {
    return lit < 0 ? Literal(static_cast<Var>(-lit), true) : Literal(static_cast<Var>(lit), false);
  }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool negative() const { return (code_ & 1u) != 0; }
  constexpr Literal negated() const { return Literal(var(), !negative()); }
  constexpr std::int64_t dimacs() const {
    return negative() ? -static_cast<std::int64_t>(var()) : static_cast<std::int64_t>(var());
  }
  /// Truth value of the literal when its variable takes `value`.
  constexpr bool holds(bool value) const { return value != negative(); }

  constexpr std::uint32_t code() const { return code_; }
  friend constexpr bool operator==(Literal, Literal) = default;
  friend constexpr auto operator<=>(Literal, Literal) = default;

 private:
  std::uint32_t code_ = 0;
};

/// One occurrence of a variable in a clause.
struct Occurrence {
  ClauseIndex clause;
  bool negative;
};

/// Immutable CNF formula: the read-only input of every algorithm.
///
/// Besides the clause list the formula keeps a per-variable occurrence index,
/// part of its canonical read-only representation, so algorithms can answer
/// "which clauses mention x" without auxiliary space.
class Formula {
 public:
  Formula() = default;

  /// Validates and normalizes: duplicate literals inside a clause are
  /// dropped (first occurrence kept), tautologies and empty clauses are
  /// rejected with InputError. If `pinned_width` is set, every clause must
  /// fit in it and max_width() reports it; otherwise max_width() is the
  /// largest observed width.
  Formula(Var num_vars, const std::vector<std::vector<Literal>>& clauses,
          std::optional<std::uint32_t> pinned_width = std::nullopt);

  Var num_vars() const { return num_vars_; }
  std::uint32_t max_width() const { return max_width_; }
  std::size_t num_clauses() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

  std::span<const Literal> clause(ClauseIndex j) const {
    return {literals_.data() + offsets_[j], literals_.data() + offsets_[j + 1]};
  }
  std::uint32_t width(ClauseIndex j) const { return offsets_[j + 1] - offsets_[j]; }
  std::size_t num_literals() const { return literals_.size(); }

  std::span<const Occurrence> occurrences(Var var) const {
    return {occurrences_.data() + occ_offsets_[var - 1], occurrences_.data() + occ_offsets_[var]};
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.num_vars_ == b.num_vars_ && a.max_width_ == b.max_width_ &&
           a.literals_ == b.literals_ && a.offsets_ == b.offsets_;
  }

 private:
  Var num_vars_ = 0;
  std::uint32_t max_width_ = 0;
  std::vector<Literal> literals_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Occurrence> occurrences_;
  std::vector<std::uint32_t> occ_offsets_;
};

/// Truth assignment over variables 1..n. Entries may be unset (partial).
class Assignment {
 public:
  static constexpr std::uint8_t kUnset = 2;

  Assignment() = default;
  explicit Assignment(Var num_vars) : values_(num_vars, kUnset) {}

  static Assignment constant(Var num_vars, bool value) {
    Assignment a(num_vars);
    for (auto& v : a.values_) v = value ? 1 : 0;
    return a;
  }

  Var size() const { return static_cast<Var>(values_.size()); }
  bool is_set(Var var) const { return values_[var - 1] != kUnset; }
  bool value(Var var) const { return values_[var - 1] == 1; }
  void set(Var var, bool value) { values_[var - 1] = value ? 1 : 0; }
  void unset(Var var) { values_[var - 1] = kUnset; }

  bool total() const {
    for (auto v : values_)
      if (v == kUnset) return false;
    return true;
  }
  std::span<const std::uint8_t> raw() const { return {values_.data(), values_.size()}; }

  friend bool operator==(const Assignment& a, const Assignment& b) { return a.values_ == b.values_; }

 private:
  std::vector<std::uint8_t, OutputAllocator<std::uint8_t>> values_;
};

/// Whether `clause` has a literal made true by `phi`. Unset variables count
/// as not making their literal true.
bool clause_satisfied(std::span<const Literal> clause, const Assignment& phi);

/// Number of clauses of `formula` satisfied by the total assignment `phi`.
/// Throws InputError if `phi` is partial or sized for a different formula.
std::uint64_t eval_assignment(const Formula& formula, const Assignment& phi);

/// Clause count per width.
std::map<std::uint32_t, std::uint64_t> clause_histogram(const Formula& formula);

/// Undirected graph in compressed adjacency form.
class Graph {
 public:
  Graph() = default;
  Graph(std::uint32_t num_vertices, std::span<const std::pair<Vertex, Vertex>> edges);

  std::uint32_t num_vertices() const { return num_vertices_; }
  std::uint64_t num_edges() const { return adjacency_.size() / 2; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::uint32_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

 private:
  std::uint32_t num_vertices_ = 0;
  aux_vector<std::uint32_t> offsets_{0};
  aux_vector<Vertex> adjacency_;
};

/// Bipartite variable/clause incidence graph. Vertices [0, n) are the
/// variables x_1..x_n, vertices [n, n + m) the clauses C_1..C_m.
class IncidenceGraph {
 public:
  IncidenceGraph() = default;
  explicit IncidenceGraph(const Formula& formula);

  Var num_vars() const { return num_vars_; }
  std::uint32_t num_clauses() const { return num_clauses_; }
  std::uint32_t num_vertices() const { return graph_.num_vertices(); }
  std::uint64_t num_edges() const { return graph_.num_edges(); }
  std::span<const Vertex> neighbors(Vertex v) const { return graph_.neighbors(v); }
  const Graph& graph() const { return graph_; }

  Vertex var_vertex(Var var) const { return var - 1; }
  Vertex clause_vertex(ClauseIndex j) const { return num_vars_ + j; }
  bool is_clause_vertex(Vertex v) const { return v >= num_vars_; }
  Var var_of(Vertex v) const { return v + 1; }
  ClauseIndex clause_of(Vertex v) const { return v - num_vars_; }

 private:
  Var num_vars_ = 0;
  std::uint32_t num_clauses_ = 0;
  Graph graph_;
};

IncidenceGraph incidence_graph(const Formula& formula);

}  // namespace sublin
