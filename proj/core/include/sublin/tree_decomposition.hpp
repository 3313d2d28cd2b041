#pragma once

// Rooted tree decompositions: min-fill construction, axiom checking, and
// rebalancing to a binary tree of logarithmic depth.

#include <cstdint>
#include <span>
#include <string>

#include "sublin/cnf.hpp"
#include "sublin/space.hpp"

namespace sublin {

class TreeDecomposition {
 public:
  static constexpr std::uint32_t kNoParent = ~0u;

  /// Adds a node with the given bag (any order; stored sorted and
  /// deduplicated). Parents are set separately; call finalize() after the
  /// last change.
  std::uint32_t add_node(std::span<const Vertex> bag, std::uint32_t parent = kNoParent);
  void set_parent(std::uint32_t node, std::uint32_t parent) { parent_[node] = parent; }
  /// Builds child lists and checks that the parent links form one rooted
  /// tree. Throws InvariantError otherwise.
  void finalize();

  std::uint32_t num_nodes() const { return static_cast<std::uint32_t>(parent_.size()); }
  std::span<const Vertex> bag(std::uint32_t node) const {
    return {bags_.data() + bag_offsets_[node], bags_.data() + bag_offsets_[node + 1]};
  }
  std::uint32_t parent(std::uint32_t node) const { return parent_[node]; }
  std::span<const std::uint32_t> children(std::uint32_t node) const {
    return {child_data_.data() + child_offsets_[node], child_data_.data() + child_offsets_[node + 1]};
  }
  std::uint32_t root() const { return root_; }
  bool bag_contains(std::uint32_t node, Vertex v) const;

  /// max |bag| − 1 (0 for an empty decomposition).
  std::uint32_t width() const;
  /// Longest root-to-leaf path in edges.
  std::uint32_t depth() const;
  /// Every node has at most two children.
  bool binary() const;

 private:
  aux_vector<Vertex> bags_;
  aux_vector<std::uint32_t> bag_offsets_{0};
  aux_vector<std::uint32_t> parent_;
  aux_vector<std::uint32_t> child_offsets_;
  aux_vector<std::uint32_t> child_data_;
  std::uint32_t root_ = kNoParent;
};

/// Min-fill elimination (ties: fewer neighbours, then smaller id). Each
/// vertex yields the bag {v} ∪ later neighbours, hung below the neighbour
/// eliminated next; bags contained in their parent are merged away and
/// components are joined under one root. Accepts disconnected graphs.
TreeDecomposition tree_decompose(const Graph& graph);

struct TdCheck {
  enum class Failure { none, empty, vertex_uncovered, edge_uncovered, occurrence_disconnected };
  Failure failure = Failure::none;
  Vertex vertex = 0;  // witness vertex (or first endpoint)
  Vertex other = 0;   // second endpoint for edge failures

  bool ok() const { return failure == Failure::none; }
  std::string describe() const;
};

/// Checks the three decomposition axioms against `graph`.
TdCheck validate_td(const Graph& graph, const TreeDecomposition& td);

/// Rebuilds `td` as a binary tree of depth O(log nodes): recursively picks a
/// centroid-like node of each remaining component (on the path between its
/// two boundary attachments when it has two), with bag B_c plus the
/// component's boundary separators, so width grows to at most 3 w + 2.
TreeDecomposition rebalance(const TreeDecomposition& td);

}  // namespace sublin
