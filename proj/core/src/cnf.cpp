#include "sublin/cnf.hpp"

#include <algorithm>
#include <string>

#include "sublin/errors.hpp"

namespace sublin {

Formula::Formula(Var num_vars, const std::vector<std::vector<Literal>>& clauses,
                 std::optional<std::uint32_t> pinned_width)
    : num_vars_(num_vars) {
  offsets_.reserve(clauses.size() + 1);
  offsets_.push_back(0);
  std::vector<std::int8_t> seen(static_cast<std::size_t>(num_vars) + 1, 0);

  for (std::size_t j = 0; j < clauses.size(); ++j) {
    const std::size_t start = literals_.size();
    for (Literal lit : clauses[j]) {
      if (lit.var() < 1 || lit.var() > num_vars) {
        throw InputError("literal " + std::to_string(lit.dimacs()) + " out of range in clause " +
                         std::to_string(j + 1));
      }
      const std::int8_t mark = lit.negative() ? -1 : 1;
      if (seen[lit.var()] == mark) continue;
      if (seen[lit.var()] == -mark) {
        for (std::size_t i = start; i < literals_.size(); ++i) seen[literals_[i].var()] = 0;
        throw InputError("tautological clause " + std::to_string(j + 1));
      }
      seen[lit.var()] = mark;
      literals_.push_back(lit);
    }
    for (std::size_t i = start; i < literals_.size(); ++i) seen[literals_[i].var()] = 0;

    const auto width = static_cast<std::uint32_t>(literals_.size() - start);
    if (width == 0) throw InputError("empty clause " + std::to_string(j + 1));
    if (pinned_width && width > *pinned_width) {
      throw InputError("clause " + std::to_string(j + 1) + " has width " + std::to_string(width) +
                       " > r = " + std::to_string(*pinned_width));
    }
    max_width_ = std::max(max_width_, width);
    offsets_.push_back(static_cast<std::uint32_t>(literals_.size()));
  }
  if (pinned_width) max_width_ = *pinned_width;

  occ_offsets_.assign(static_cast<std::size_t>(num_vars) + 1, 0);
  for (Literal lit : literals_) ++occ_offsets_[lit.var()];
  for (Var v = 1; v <= num_vars; ++v) occ_offsets_[v] += occ_offsets_[v - 1];
  occurrences_.resize(literals_.size());
  std::vector<std::uint32_t> fill(occ_offsets_.begin(), occ_offsets_.end() - 1);
  for (ClauseIndex j = 0; j + 1 < offsets_.size(); ++j) {
    for (std::uint32_t i = offsets_[j]; i < offsets_[j + 1]; ++i) {
      const Literal lit = literals_[i];
      occurrences_[fill[lit.var() - 1]++] = Occurrence{j, lit.negative()};
    }
  }
}

bool clause_satisfied(std::span<const Literal> clause, const Assignment& phi) {
  for (Literal lit : clause) {
    if (phi.is_set(lit.var()) && lit.holds(phi.value(lit.var()))) return true;
  }
  return false;
}

std::uint64_t eval_assignment(const Formula& formula, const Assignment& phi) {
  if (phi.size() != formula.num_vars()) {
    throw InputError("assignment covers " + std::to_string(phi.size()) + " variables, formula has " +
                     std::to_string(formula.num_vars()));
  }
  if (!phi.total()) throw InputError("assignment is partial");
  std::uint64_t count = 0;
  for (ClauseIndex j = 0; j < formula.num_clauses(); ++j) {
    if (clause_satisfied(formula.clause(j), phi)) ++count;
  }
  return count;
}

std::map<std::uint32_t, std::uint64_t> clause_histogram(const Formula& formula) {
  std::map<std::uint32_t, std::uint64_t> histogram;
  for (ClauseIndex j = 0; j < formula.num_clauses(); ++j) ++histogram[formula.width(j)];
  return histogram;
}

Graph::Graph(std::uint32_t num_vertices, std::span<const std::pair<Vertex, Vertex>> edges)
    : num_vertices_(num_vertices) {
  offsets_.assign(static_cast<std::size_t>(num_vertices) + 1, 0);
  for (auto [u, v] : edges) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  for (std::uint32_t i = 0; i < num_vertices; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(offsets_.back());
  aux_vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (auto [u, v] : edges) {
    adjacency_[fill[u]++] = v;
    adjacency_[fill[v]++] = u;
  }
  for (std::uint32_t i = 0; i < num_vertices; ++i) {
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
  }
}

IncidenceGraph::IncidenceGraph(const Formula& formula)
    : num_vars_(formula.num_vars()), num_clauses_(static_cast<std::uint32_t>(formula.num_clauses())) {
  aux_vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(formula.num_literals());
  for (ClauseIndex j = 0; j < num_clauses_; ++j) {
    for (Literal lit : formula.clause(j)) edges.emplace_back(var_vertex(lit.var()), clause_vertex(j));
  }
  graph_ = Graph(num_vars_ + num_clauses_, edges);
}

IncidenceGraph incidence_graph(const Formula& formula) { return IncidenceGraph(formula); }

}  // namespace sublin
