#pragma once

// Baker-style partition of a formula with planar incidence graph.
//
// The incidence graph is made connected by a dummy variable vertex D that
// is adjacent to one representative clause per component (the clause of
// least index) and to a fresh clause vertex ¬D. BFS from D gives levels
// L_1 = {D}, L_2, ...; odd levels hold variables, even levels clauses.
// With U_j = L_2j ∪ L_2j+1 ∪ L_2j+2 and W_i the union of the U_j with
// j ≡ i (mod k), every clause level lies in exactly two U_j of different
// residues, so Σ_i |C(W_i)| <= 2m and the lightest W_i loses <= 2m/k
// clauses. Deleting it leaves variable-disjoint parts, each within 2k−3
// consecutive levels.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sublin/cnf.hpp"
#include "sublin/errors.hpp"
#include "sublin/space.hpp"

namespace sublin {

/// The incidence graph of a formula, read directly off its clause list and
/// occurrence index. Vertex ids follow IncidenceGraph.
class FormulaGraph {
 public:
  explicit FormulaGraph(const Formula& formula) : f_(&formula) {}

  const Formula& formula() const { return *f_; }
  std::uint32_t num_vertices() const { return f_->num_vars() + static_cast<std::uint32_t>(f_->num_clauses()); }
  bool is_clause_vertex(Vertex v) const { return v >= f_->num_vars(); }

  template <class Fn>
  void for_each_neighbor(Vertex v, Fn&& fn) const {
    const Var n = f_->num_vars();
    if (v < n) {
      for (const Occurrence& occ : f_->occurrences(v + 1)) fn(static_cast<Vertex>(n + occ.clause));
    } else {
      for (Literal lit : f_->clause(v - n)) fn(static_cast<Vertex>(lit.var() - 1));
    }
  }

 private:
  const Formula* f_;
};

/// Adapter exposing a Graph through the neighbour-callback interface.
class GraphView {
 public:
  explicit GraphView(const Graph& g) : g_(&g) {}
  std::uint32_t num_vertices() const { return g_->num_vertices(); }
  template <class Fn>
  void for_each_neighbor(Vertex v, Fn&& fn) const {
    for (Vertex w : g_->neighbors(v)) fn(w);
  }

 private:
  const Graph* g_;
};

/// Level-synchronous BFS keeping only the last two levels in memory, plus a
/// checkpoint (L_{j-1}, L_j) every `checkpoint_every` levels so a later scan
/// can resume near any level instead of restarting at the root. Works on any
/// graph with num_vertices() and for_each_neighbor(v, fn).
///
/// The first complete scan records the checkpoints and the depth.
class LevelBfs {
 public:
  LevelBfs(Vertex root, std::uint32_t checkpoint_every, const char* label = "bfs-levels")
      : root_(root), every_(checkpoint_every), label_(label) {}

  /// Calls visit(level, sorted span of the level's vertices) for levels
  /// from_level, from_level + 1, ...; visit may return false to stop.
  /// Returns true if the scan reached the last level.
  template <class G, class Visit>
  bool scan(const G& g, Visit&& visit, std::uint32_t from_level = 1) const;

  /// Index of the deepest level (d_0); 0 until a scan has completed.
  std::uint32_t depth0() const { return depth0_; }
  std::uint64_t visited() const { return visited_; }
  std::size_t checkpoints() const { return checkpoints_.size(); }

 private:
  struct Checkpoint {
    std::uint32_t level;
    std::uint32_t prev_offset, prev_size, cur_offset, cur_size;
  };

  Vertex root_;
  std::uint32_t every_;
  const char* label_;
  mutable aux_vector<Vertex> store_;
  mutable aux_vector<Checkpoint> checkpoints_;
  mutable std::uint32_t depth0_ = 0;
  mutable std::uint64_t visited_ = 0;
  mutable bool complete_ = false;
};

/// The connected augmentation of F's incidence graph. Vertices [0, n) are
/// the variables, [n, n + m) the clauses, then D = x_{n+1} and ¬D.
/// Variables occurring in no clause are left out (they stay isolated).
class AugmentedGraph {
 public:
  explicit AugmentedGraph(const Formula& formula) : base_(formula) {}

  const Formula& formula() const { return base_.formula(); }
  Var n() const { return base_.formula().num_vars(); }
  std::uint32_t m() const { return static_cast<std::uint32_t>(base_.formula().num_clauses()); }
  std::uint32_t num_vertices() const { return n() + m() + 2; }
  Vertex dummy_var() const { return n() + m(); }
  Vertex dummy_clause() const { return n() + m() + 1; }
  bool is_dummy(Vertex v) const { return v >= n() + m(); }
  bool is_clause_vertex(Vertex v) const { return (v >= n() && v < n() + m()) || v == dummy_clause(); }
  bool is_isolated(Vertex v) const { return v < n() && formula().occurrences(v + 1).empty(); }
  /// Vertices of the connected augmentation (isolated variables excluded).
  std::uint32_t active_vertices() const;

  /// Whether clause j has the least index in its component of G_F; checked
  /// by a BFS that stops at the first lower-index clause.
  bool is_representative(ClauseIndex j) const;

  /// Neighbours in the augmented graph, except that the edge from a
  /// representative clause back to D is omitted: BFS from D never needs it,
  /// because D sits on the level before every representative.
  template <class Fn>
  void for_each_neighbor(Vertex v, Fn&& fn) const {
    if (v == dummy_var()) {
      for (ClauseIndex j = 0; j < m(); ++j)
        if (is_representative(j)) fn(static_cast<Vertex>(n() + j));
      fn(dummy_clause());
    } else if (v == dummy_clause()) {
      fn(dummy_var());
    } else {
      base_.for_each_neighbor(v, fn);
    }
  }

  /// F' as a formula: representatives gain the literal x_{n+1} and the
  /// unit (¬x_{n+1}) is appended, so the incidence graph of F' is exactly
  /// the augmented graph. Assignments with x_{n+1} = 0 restrict to F with
  /// the same count plus one.
  Formula augmented_formula() const;

 private:
  FormulaGraph base_;
};

/// Materialized BFS levels (reporting and tests).
struct BfsLevels {
  Vertex root = 0;
  std::vector<std::uint32_t> level_of;  // 1-based; 0 = not reached
  std::uint32_t depth0 = 0;             // deepest level
  std::uint32_t depth = 0;              // depth0 rounded up to even
};

/// Throws InputError if some vertex of `g` is unreachable from `root`.
BfsLevels bfs_levels(const Graph& g, Vertex root);
/// Levels of the augmented graph from D; isolated variables keep level 0.
BfsLevels bfs_levels(const AugmentedGraph& g);

struct DeletionBand {
  std::uint32_t k = 2;
  std::uint32_t depth = 0;  // even-rounded
  bool shallow = false;     // depth < 2k: nothing is deleted
  std::uint32_t chosen = 0;
  std::uint64_t clause_loss = 0;
  aux_vector<std::uint64_t> losses;  // |C(W_i)| per residue

  /// Whether BFS level `level` belongs to W_chosen.
  bool deletes(std::uint32_t level) const;
};

/// Accumulates |C(W_i)| for every residue from per-level clause counts.
class BandLosses {
 public:
  explicit BandLosses(std::uint32_t k);
  /// `clauses` clause vertices of F sit on even level `level`.
  void add(std::uint32_t level, std::uint64_t clauses);
  /// Picks the lightest residue (ties to the smallest). Shallow instances
  /// delete nothing and report zero loss everywhere.
  DeletionBand finish(std::uint32_t depth0) const;

 private:
  std::uint32_t k_;
  aux_vector<std::uint64_t> losses_;
};

DeletionBand choose_deletion_band(const AugmentedGraph& g, const BfsLevels& levels, std::uint32_t k);

/// One emitted part: a set of clauses of F and the variables they use.
struct PartView {
  std::uint32_t index = 0;
  std::span<const ClauseIndex> clauses;  // ascending
  std::span<const Var> vars;             // ascending
  std::uint32_t first_level = 0;
  std::uint32_t last_level = 0;
};

/// Restartable stream of the parts of F for modulus k. The first call to
/// band() or scan() runs one BFS pass that fixes depth and band; each scan
/// runs one more BFS pass that resumes from checkpoints.
class PartitionStream {
 public:
  PartitionStream(const Formula& formula, std::uint32_t k);

  const AugmentedGraph& graph() const { return graph_; }
  std::uint32_t k() const { return k_; }
  const DeletionBand& band() const;
  std::uint32_t depth0() const { return bfs_.depth0(); }

  /// visit(const PartView&) may return false to stop early.
  template <class Visit>
  bool scan(Visit&& visit) const;

 private:
  AugmentedGraph graph_;
  std::uint32_t k_;
  LevelBfs bfs_;
  mutable DeletionBand band_;
  mutable bool planned_ = false;
};

PartitionStream partition(const Formula& formula, std::uint32_t k);

/// Owned copy of a part, for checking and for tools.
struct PartData {
  std::vector<ClauseIndex> clauses;
  std::vector<Var> vars;
  std::uint32_t first_level = 0;
  std::uint32_t last_level = 0;
};
std::vector<PartData> collect_parts(const PartitionStream& parts);

/// Sub-formula over the original variable numbering.
Formula part_formula(const Formula& formula, const PartData& part);

struct PartitionReport {
  std::uint32_t k = 0;
  std::uint64_t parts = 0;
  bool disjoint = true;
  Var witness_var = 0;  // a variable shared by two parts, or used outside its part
  std::uint64_t retained = 0;
  std::uint64_t retained_bound = 0;  // ⌈(1 − 2/k) m⌉
  bool retained_ok = true;
  std::uint32_t max_level_span = 0;  // levels occupied, counted inclusively
  bool span_ok = true;
  std::uint64_t loss_sum = 0;  // Σ_i |C(W_i)|
  bool loss_sum_ok = true;
  std::uint64_t min_loss = 0;
  bool min_loss_ok = true;  // min_i |C(W_i)| <= 2m/k

  bool ok() const { return disjoint && retained_ok && span_ok && loss_sum_ok && min_loss_ok; }
};

/// Checks a partition with its own queue BFS over an explicitly built
/// augmented graph: disjointness, no clause leaving its part, retention,
/// level span <= 2k − 3, and the band-loss sum.
PartitionReport verify_partition(const Formula& formula, const std::vector<PartData>& parts, std::uint32_t k);

struct EulerCheck {
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;
  bool plausible = true;  // edges <= 2 vertices − 4 (bipartite planar bound)
};
/// Necessary condition for planarity of the incidence graph.
EulerCheck euler_check(const Formula& formula);

// ---------------------------------------------------------------------------

namespace detail {

template <class Vec>
bool sorted_contains(const Vec& v, Vertex x) {
  return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace detail

template <class G, class Visit>
bool LevelBfs::scan(const G& g, Visit&& visit, std::uint32_t from_level) const {
  meter::record_pass(label_);
  ScopedCells state(6);
  aux_vector<Vertex> prev;
  aux_vector<Vertex> cur;
  aux_vector<Vertex> next;
  std::uint32_t level = 1;
  cur.push_back(root_);

  if (complete_ && from_level > 1) {
    if (from_level > depth0_) return true;
    const Checkpoint* best = nullptr;
    for (const Checkpoint& c : checkpoints_)
      if (c.level <= from_level) best = &c;
    if (best != nullptr) {
      level = best->level;
      prev.assign(store_.begin() + best->prev_offset, store_.begin() + best->prev_offset + best->prev_size);
      cur.assign(store_.begin() + best->cur_offset, store_.begin() + best->cur_offset + best->cur_size);
    }
  }

  const bool recording = !complete_;
  std::uint64_t seen = 0;
  if (recording && every_ > 0) checkpoints_.reserve(g.num_vertices() / every_ + 2);
  // Grows in steps of about `every_` so capacity tracks the stored levels.
  auto store_append = [&](const aux_vector<Vertex>& level_vertices) {
    const std::size_t need = store_.size() + level_vertices.size();
    if (need > store_.capacity()) store_.reserve(need + every_);
    store_.insert(store_.end(), level_vertices.begin(), level_vertices.end());
  };
  while (!cur.empty()) {
    if (recording) {
      seen += cur.size();
      if (every_ > 0 && (level - 1) % every_ == 0) {
        Checkpoint c{level, static_cast<std::uint32_t>(store_.size()), static_cast<std::uint32_t>(prev.size()), 0, 0};
        store_append(prev);
        c.cur_offset = static_cast<std::uint32_t>(store_.size());
        c.cur_size = static_cast<std::uint32_t>(cur.size());
        store_append(cur);
        checkpoints_.push_back(c);
      }
    }
    if (level >= from_level) {
      meter::tick(cur.size());
      using R = std::invoke_result_t<Visit&, std::uint32_t, std::span<const Vertex>>;
      if constexpr (std::is_same_v<R, void>) {
        visit(level, std::span<const Vertex>(cur.data(), cur.size()));
      } else {
        if (!visit(level, std::span<const Vertex>(cur.data(), cur.size()))) return false;
      }
    }
    next.clear();
    for (Vertex u : cur) {
      g.for_each_neighbor(u, [&](Vertex w) {
        if (!detail::sorted_contains(prev, w) && !detail::sorted_contains(cur, w)) next.push_back(w);
      });
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    std::swap(prev, cur);
    std::swap(cur, next);
    if (!cur.empty()) ++level;
  }
  if (recording) {
    depth0_ = level;
    visited_ = seen;
    complete_ = true;
  }
  return true;
}

template <class Visit>
bool PartitionStream::scan(Visit&& visit) const {
  const DeletionBand& band = this->band();
  ScopedCells state(8);
  aux_vector<Vertex> slab;
  aux_vector<std::uint32_t> slab_level;
  aux_vector<std::pair<Vertex, std::uint32_t>> index;
  aux_vector<std::uint32_t> parent;
  aux_vector<std::pair<std::uint32_t, std::uint32_t>> groups;
  aux_vector<ClauseIndex> part_clauses;
  aux_vector<Var> part_vars;
  std::uint32_t part_index = 0;
  bool stopped = false;
  const Var n = graph_.n();

  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto position = [&](Vertex v) -> std::uint32_t {
    auto it = std::lower_bound(index.begin(), index.end(), std::pair<Vertex, std::uint32_t>{v, 0});
    if (it == index.end() || it->first != v) throw InvariantError("partition: clause neighbour outside its slab");
    return it->second;
  };

  auto flush = [&]() -> bool {
    if (slab.empty()) return true;
    const auto size = static_cast<std::uint32_t>(slab.size());
    index.clear();
    parent.resize(size);
    for (std::uint32_t i = 0; i < size; ++i) {
      index.emplace_back(slab[i], i);
      parent[i] = i;
    }
    std::sort(index.begin(), index.end());
    for (std::uint32_t i = 0; i < size; ++i) {
      const Vertex v = slab[i];
      if (v < n) continue;
      for (Literal lit : graph_.formula().clause(v - n)) {
        const std::uint32_t a = find(i);
        const std::uint32_t b = find(position(lit.var() - 1));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
    groups.clear();
    for (std::uint32_t i = 0; i < size; ++i) groups.emplace_back(find(i), i);
    std::sort(groups.begin(), groups.end(), [&](const auto& x, const auto& y) {
      return x.first != y.first ? x.first < y.first : slab[x.second] < slab[y.second];
    });
    std::size_t g = 0;
    while (g < groups.size()) {
      std::size_t h = g;
      part_clauses.clear();
      part_vars.clear();
      std::uint32_t lo = ~0u;
      std::uint32_t hi = 0;
      while (h < groups.size() && groups[h].first == groups[g].first) {
        const std::uint32_t i = groups[h].second;
        const Vertex v = slab[i];
        if (v < n) {
          part_vars.push_back(v + 1);
        } else {
          part_clauses.push_back(v - n);
        }
        lo = std::min(lo, slab_level[i]);
        hi = std::max(hi, slab_level[i]);
        ++h;
      }
      if (!part_clauses.empty()) {
        PartView part;
        part.index = part_index++;
        part.clauses = {part_clauses.data(), part_clauses.size()};
        part.vars = {part_vars.data(), part_vars.size()};
        part.first_level = lo;
        part.last_level = hi;
        meter::tick();
        if constexpr (std::is_same_v<std::invoke_result_t<Visit&, const PartView&>, void>) {
          visit(part);
        } else {
          if (!visit(part)) return false;
        }
      }
      g = h;
    }
    slab.clear();
    slab_level.clear();
    return true;
  };

  meter::record_pass("partition");
  bfs_.scan(graph_, [&](std::uint32_t level, std::span<const Vertex> vertices) -> bool {
    if (level == 1) return true;
    if (band.deletes(level)) {
      if (!flush()) {
        stopped = true;
        return false;
      }
      return true;
    }
    for (Vertex v : vertices) {
      if (graph_.is_dummy(v)) continue;
      slab.push_back(v);
      slab_level.push_back(level);
    }
    return true;
  });
  if (!stopped && !flush()) stopped = true;
  return !stopped;
}

}  // namespace sublin
