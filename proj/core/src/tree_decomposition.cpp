#include "sublin/tree_decomposition.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <vector>

#include "sublin/errors.hpp"

namespace sublin {

std::uint32_t TreeDecomposition::add_node(std::span<const Vertex> bag, std::uint32_t parent) {
  const auto start = bags_.size();
  bags_.insert(bags_.end(), bag.begin(), bag.end());
  std::sort(bags_.begin() + static_cast<std::ptrdiff_t>(start), bags_.end());
  bags_.erase(std::unique(bags_.begin() + static_cast<std::ptrdiff_t>(start), bags_.end()), bags_.end());
  bag_offsets_.push_back(static_cast<std::uint32_t>(bags_.size()));
  parent_.push_back(parent);
  return static_cast<std::uint32_t>(parent_.size() - 1);
}

void TreeDecomposition::finalize() {
  const std::uint32_t n = num_nodes();
  child_offsets_.assign(n + 1, 0);
  root_ = kNoParent;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (parent_[v] == kNoParent) {
      if (root_ != kNoParent) throw InvariantError("tree decomposition has several roots");
      root_ = v;
    } else {
      if (parent_[v] >= n || parent_[v] == v) throw InvariantError("tree decomposition has a bad parent link");
      ++child_offsets_[parent_[v] + 1];
    }
  }
  if (n > 0 && root_ == kNoParent) throw InvariantError("tree decomposition has no root");
  for (std::uint32_t v = 0; v < n; ++v) child_offsets_[v + 1] += child_offsets_[v];
  child_data_.assign(n == 0 ? 0 : n - 1, 0);
  aux_vector<std::uint32_t> fill(child_offsets_.begin(), child_offsets_.end() - 1);
  for (std::uint32_t v = 0; v < n; ++v)
    if (parent_[v] != kNoParent) child_data_[fill[parent_[v]]++] = v;
  // Every node must reach the root: count nodes reached from it.
  std::uint32_t reached = 0;
  if (n > 0) {
    aux_vector<std::uint32_t> stack{root_};
    while (!stack.empty()) {
      const std::uint32_t v = stack.back();
      stack.pop_back();
      if (++reached > n) break;
      for (std::uint32_t c : children(v)) stack.push_back(c);
    }
  }
  if (reached != n) throw InvariantError("tree decomposition parent links contain a cycle");
}

bool TreeDecomposition::bag_contains(std::uint32_t node, Vertex v) const {
  const auto b = bag(node);
  return std::binary_search(b.begin(), b.end(), v);
}

std::uint32_t TreeDecomposition::width() const {
  std::uint32_t w = 0;
  for (std::uint32_t v = 0; v < num_nodes(); ++v) w = std::max<std::uint32_t>(w, static_cast<std::uint32_t>(bag(v).size()));
  return w == 0 ? 0 : w - 1;
}

std::uint32_t TreeDecomposition::depth() const {
  if (num_nodes() == 0) return 0;
  std::uint32_t best = 0;
  aux_vector<std::pair<std::uint32_t, std::uint32_t>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    for (std::uint32_t c : children(v)) stack.emplace_back(c, d + 1);
  }
  return best;
}

bool TreeDecomposition::binary() const {
  for (std::uint32_t v = 0; v < num_nodes(); ++v)
    if (children(v).size() > 2) return false;
  return true;
}

// ---------------------------------------------------------------------------

TreeDecomposition tree_decompose(const Graph& graph) {
  const std::uint32_t n = graph.num_vertices();
  TreeDecomposition td;
  if (n == 0) {
    td.finalize();
    return td;
  }
  using Adj = aux_vector<Vertex>;
  aux_vector<Adj> adj(n);
  for (Vertex v = 0; v < n; ++v) {
    auto nb = graph.neighbors(v);
    adj[v].assign(nb.begin(), nb.end());
    std::sort(adj[v].begin(), adj[v].end());
    adj[v].erase(std::unique(adj[v].begin(), adj[v].end()), adj[v].end());
    adj[v].erase(std::remove(adj[v].begin(), adj[v].end(), v), adj[v].end());
  }
  auto adjacent = [&](Vertex a, Vertex b) { return std::binary_search(adj[a].begin(), adj[a].end(), b); };
  auto fill_of = [&](Vertex v) {
    std::uint64_t missing = 0;
    const auto& nb = adj[v];
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!adjacent(nb[i], nb[j])) ++missing;
    return missing;
  };

  using Key = std::tuple<std::uint64_t, std::uint32_t, Vertex>;
  std::set<Key, std::less<Key>, AuxAllocator<Key>> queue;
  aux_vector<Key> key(n);
  for (Vertex v = 0; v < n; ++v) {
    key[v] = Key{fill_of(v), static_cast<std::uint32_t>(adj[v].size()), v};
    queue.insert(key[v]);
  }

  aux_vector<std::uint32_t> position(n, 0);
  aux_vector<Vertex> order;
  order.reserve(n);
  aux_vector<Vertex> bag;
  aux_vector<Vertex> touched;
  aux_vector<std::uint8_t> eliminated(n, 0);
  while (!queue.empty()) {
    const Vertex v = std::get<2>(*queue.begin());
    queue.erase(queue.begin());
    position[v] = static_cast<std::uint32_t>(order.size());
    order.push_back(v);
    eliminated[v] = 1;

    bag.assign(adj[v].begin(), adj[v].end());
    bag.push_back(v);
    td.add_node(bag);

    const Adj nbrs = adj[v];
    for (Vertex a : nbrs) {
      auto& la = adj[a];
      la.erase(std::lower_bound(la.begin(), la.end(), v));
      for (Vertex b : nbrs) {
        if (b == a) continue;
        auto it = std::lower_bound(la.begin(), la.end(), b);
        if (it == la.end() || *it != b) la.insert(it, b);
      }
    }
    adj[v].clear();

    touched.clear();
    for (Vertex a : nbrs) {
      touched.push_back(a);
      for (Vertex b : adj[a]) touched.push_back(b);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (Vertex u : touched) {
      if (eliminated[u]) continue;
      const Key fresh{fill_of(u), static_cast<std::uint32_t>(adj[u].size()), u};
      if (fresh == key[u]) continue;
      queue.erase(key[u]);
      key[u] = fresh;
      queue.insert(fresh);
    }
  }

  // Node i was created for order[i]. Parent: the bag neighbour eliminated
  // first after it. Then merge bags contained in their parent.
  aux_vector<std::uint32_t> parent(n, TreeDecomposition::kNoParent);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t best = TreeDecomposition::kNoParent;
    for (Vertex u : td.bag(i))
      if (u != order[i]) best = std::min(best, position[u]);
    parent[i] = best;
  }
  aux_vector<std::uint32_t> alias(n);
  for (std::uint32_t i = 0; i < n; ++i) alias[i] = i;
  auto resolve = [&](std::uint32_t x) {
    while (alias[x] != x) x = alias[x];
    return x;
  };
  for (std::uint32_t i = 0; i < n; ++i) {
    if (parent[i] == TreeDecomposition::kNoParent) continue;
    const auto b = td.bag(i);
    const auto pb = td.bag(parent[i]);
    if (std::includes(pb.begin(), pb.end(), b.begin(), b.end())) alias[i] = parent[i];
  }

  TreeDecomposition out;
  aux_vector<std::uint32_t> new_id(n, TreeDecomposition::kNoParent);
  for (std::uint32_t i = 0; i < n; ++i)
    if (alias[i] == i) new_id[i] = out.add_node(td.bag(i));
  std::uint32_t last_root = TreeDecomposition::kNoParent;
  for (std::uint32_t i = n; i-- > 0;) {
    if (alias[i] != i) continue;
    if (parent[i] == TreeDecomposition::kNoParent) {
      // Several components: hang earlier roots below the last one.
      if (last_root == TreeDecomposition::kNoParent) {
        last_root = new_id[i];
      } else {
        out.set_parent(new_id[i], last_root);
      }
    } else {
      out.set_parent(new_id[i], new_id[resolve(parent[i])]);
    }
  }
  out.finalize();
  return out;
}

// ---------------------------------------------------------------------------

std::string TdCheck::describe() const {
  switch (failure) {
    case Failure::none:
      return "valid";
    case Failure::empty:
      return "decomposition has no nodes";
    case Failure::vertex_uncovered:
      return "vertex " + std::to_string(vertex) + " is in no bag";
    case Failure::edge_uncovered:
      return "edge " + std::to_string(vertex) + "-" + std::to_string(other) + " is in no bag";
    case Failure::occurrence_disconnected:
      return "bags containing vertex " + std::to_string(vertex) + " are not connected";
  }
  return "?";
}

TdCheck validate_td(const Graph& graph, const TreeDecomposition& td) {
  TdCheck check;
  const std::uint32_t n = graph.num_vertices();
  if (td.num_nodes() == 0) {
    if (n > 0) check.failure = TdCheck::Failure::empty;
    return check;
  }
  std::vector<std::vector<std::uint32_t>> nodes_of(n);
  for (std::uint32_t x = 0; x < td.num_nodes(); ++x) {
    for (Vertex v : td.bag(x)) {
      if (v < n) nodes_of[v].push_back(x);
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (nodes_of[v].empty()) {
      check.failure = TdCheck::Failure::vertex_uncovered;
      check.vertex = v;
      return check;
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : graph.neighbors(v)) {
      if (w <= v) continue;
      const auto& a = nodes_of[v];
      const auto& b = nodes_of[w];
      std::size_t i = 0;
      std::size_t j = 0;
      bool shared = false;
      while (i < a.size() && j < b.size() && !shared) {
        if (a[i] == b[j]) {
          shared = true;
        } else if (a[i] < b[j]) {
          ++i;
        } else {
          ++j;
        }
      }
      if (!shared) {
        check.failure = TdCheck::Failure::edge_uncovered;
        check.vertex = v;
        check.other = w;
        return check;
      }
    }
  }
  // Nodes holding v form a subtree iff exactly one of them has a parent
  // that does not hold v.
  for (Vertex v = 0; v < n; ++v) {
    std::uint32_t tops = 0;
    for (std::uint32_t x : nodes_of[v]) {
      const std::uint32_t p = td.parent(x);
      if (p == TreeDecomposition::kNoParent || !td.bag_contains(p, v)) ++tops;
    }
    if (tops != 1) {
      check.failure = TdCheck::Failure::occurrence_disconnected;
      check.vertex = v;
      return check;
    }
  }
  return check;
}

// ---------------------------------------------------------------------------

namespace {

struct RebalanceItem {
  std::uint32_t start;       // any node of the component in the input tree
  std::uint32_t new_parent;  // node of the output tree to hang it under
};

}  // namespace

TreeDecomposition rebalance(const TreeDecomposition& td) {
  TreeDecomposition out;
  const std::uint32_t n = td.num_nodes();
  if (n == 0) {
    out.finalize();
    return out;
  }
  ScopedCells state(8);
  auto for_each_tree_neighbor = [&](std::uint32_t u, auto&& fn) {
    if (td.parent(u) != TreeDecomposition::kNoParent) fn(td.parent(u));
    for (std::uint32_t c : td.children(u)) fn(c);
  };

  aux_vector<std::uint8_t> removed(n, 0);
  aux_vector<std::uint32_t> comp;       // component nodes in DFS preorder
  aux_vector<std::uint32_t> up(n, 0);   // DFS parent within the component
  aux_vector<std::uint32_t> size(n, 0);
  aux_vector<std::uint32_t> level(n, 0);
  aux_vector<std::pair<std::uint32_t, std::uint32_t>> boundary;  // (inside, removed)
  aux_vector<Vertex> bag;
  aux_vector<std::pair<std::uint32_t, std::uint32_t>> subs;  // (size, start)
  aux_vector<RebalanceItem> work{{td.root(), TreeDecomposition::kNoParent}};
  // Pending binarization groups: a range of `subs_store` to split under a node.
  struct Group {
    std::uint32_t begin, end, parent;
  };
  aux_vector<Group> groups;
  aux_vector<std::pair<std::uint32_t, std::uint32_t>> subs_store;
  constexpr std::uint32_t kNone = TreeDecomposition::kNoParent;

  auto lca = [&](std::uint32_t a, std::uint32_t b) {
    while (level[a] > level[b]) a = up[a];
    while (level[b] > level[a]) b = up[b];
    while (a != b) {
      a = up[a];
      b = up[b];
    }
    return a;
  };

  while (!work.empty() || !groups.empty()) {
    if (work.empty()) {
      // Split one group into at most two halves, creating copies of the
      // parent bag for halves with more than one component.
      const Group g = groups.back();
      groups.pop_back();
      const std::uint32_t count = g.end - g.begin;
      if (count <= 2) {
        for (std::uint32_t i = g.begin; i < g.end; ++i) work.push_back({subs_store[i].second, g.parent});
        continue;
      }
      // Sorted by size descending; each goes to the lighter half.
      std::uint64_t w0 = 0;
      std::uint64_t w1 = 0;
      aux_vector<std::pair<std::uint32_t, std::uint32_t>> half0;
      aux_vector<std::pair<std::uint32_t, std::uint32_t>> half1;
      for (std::uint32_t i = g.begin; i < g.end; ++i) {
        if (w0 <= w1) {
          half0.push_back(subs_store[i]);
          w0 += subs_store[i].first;
        } else {
          half1.push_back(subs_store[i]);
          w1 += subs_store[i].first;
        }
      }
      std::copy(half0.begin(), half0.end(), subs_store.begin() + g.begin);
      std::copy(half1.begin(), half1.end(), subs_store.begin() + g.begin + static_cast<std::ptrdiff_t>(half0.size()));
      const std::uint32_t mid = g.begin + static_cast<std::uint32_t>(half0.size());
      for (auto [b, e] : {std::pair{g.begin, mid}, std::pair{mid, g.end}}) {
        if (e - b == 1) {
          work.push_back({subs_store[b].second, g.parent});
        } else {
          bag.assign(out.bag(g.parent).begin(), out.bag(g.parent).end());
          const std::uint32_t copy = out.add_node(bag, g.parent);
          groups.push_back({b, e, copy});
        }
      }
      continue;
    }

    const RebalanceItem item = work.back();
    work.pop_back();

    // Component containing item.start, rooted there.
    comp.clear();
    boundary.clear();
    comp.push_back(item.start);
    up[item.start] = kNone;
    level[item.start] = 0;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      const std::uint32_t u = comp[i];
      for_each_tree_neighbor(u, [&](std::uint32_t x) {
        if (removed[x]) {
          boundary.emplace_back(u, x);
        } else if (x != up[u]) {
          up[x] = u;
          level[x] = level[u] + 1;
          comp.push_back(x);
        }
      });
    }
    if (boundary.size() > 2) throw InvariantError("rebalance: component with more than two boundary edges");
    for (std::size_t i = comp.size(); i-- > 0;) {
      const std::uint32_t u = comp[i];
      size[u] = 1;
      for_each_tree_neighbor(u, [&](std::uint32_t x) {
        if (!removed[x] && x != up[u]) size[u] += size[x];
      });
    }
    const auto total = static_cast<std::uint32_t>(comp.size());
    std::uint32_t centroid = item.start;
    while (true) {
      std::uint32_t heavy = kNone;
      for_each_tree_neighbor(centroid, [&](std::uint32_t x) {
        if (!removed[x] && x != up[centroid] && 2 * size[x] > total) heavy = x;
      });
      if (heavy == kNone) break;
      centroid = heavy;
    }
    std::uint32_t chosen = centroid;
    if (boundary.size() == 2) {
      // Median of (a1, a2, centroid): the point of the a1–a2 path closest
      // to the centroid.
      const std::uint32_t a1 = boundary[0].first;
      const std::uint32_t a2 = boundary[1].first;
      const std::uint32_t x = lca(a1, a2);
      const std::uint32_t y = lca(a1, centroid);
      const std::uint32_t z = lca(a2, centroid);
      chosen = x;
      if (level[y] > level[chosen]) chosen = y;
      if (level[z] > level[chosen]) chosen = z;
    }

    bag.assign(td.bag(chosen).begin(), td.bag(chosen).end());
    for (auto [inside, outside] : boundary) {
      const auto bi = td.bag(inside);
      const auto bo = td.bag(outside);
      std::set_intersection(bi.begin(), bi.end(), bo.begin(), bo.end(), std::back_inserter(bag));
    }
    const std::uint32_t node = out.add_node(bag, item.new_parent);
    removed[chosen] = 1;

    subs.clear();
    for_each_tree_neighbor(chosen, [&](std::uint32_t x) {
      if (removed[x]) return;
      const std::uint32_t s = (x == up[chosen]) ? total - size[chosen] : size[x];
      subs.emplace_back(s, x);
    });
    std::sort(subs.begin(), subs.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (subs.size() <= 2) {
      for (const auto& s : subs) work.push_back({s.second, node});
    } else {
      const auto begin = static_cast<std::uint32_t>(subs_store.size());
      subs_store.insert(subs_store.end(), subs.begin(), subs.end());
      groups.push_back({begin, static_cast<std::uint32_t>(subs_store.size()), node});
    }
  }
  out.finalize();
  return out;
}

}  // namespace sublin
