#include "sublin/planar.hpp"

#include <cmath>
#include <numeric>
#include <queue>

namespace sublin {

std::uint32_t AugmentedGraph::active_vertices() const {
  std::uint32_t count = m() + 2;
  for (Var v = 1; v <= n(); ++v) count += formula().occurrences(v).empty() ? 0 : 1;
  return count;
}

bool AugmentedGraph::is_representative(ClauseIndex j) const {
  const Vertex start = n() + j;
  const Vertex first_clause = n();
  LevelBfs bfs(start, 0, "component-root");
  bool lower_found = false;
  bfs.scan(base_, [&](std::uint32_t, std::span<const Vertex> level) -> bool {
    for (Vertex v : level) {
      if (v >= first_clause && v < start) {
        lower_found = true;
        return false;
      }
    }
    return true;
  });
  return !lower_found;
}

Formula AugmentedGraph::augmented_formula() const {
  const Formula& f = formula();
  const Var dummy = n() + 1;
  std::vector<std::vector<Literal>> clauses;
  clauses.reserve(f.num_clauses() + 1);
  for (ClauseIndex j = 0; j < m(); ++j) {
    auto c = f.clause(j);
    clauses.emplace_back(c.begin(), c.end());
    if (is_representative(j)) clauses.back().push_back(Literal(dummy, false));
  }
  clauses.push_back({Literal(dummy, true)});
  return Formula(dummy, clauses);
}

namespace {

template <class G>
BfsLevels materialize_levels(const G& g, Vertex root) {
  BfsLevels out;
  out.root = root;
  out.level_of.assign(g.num_vertices(), 0);
  LevelBfs bfs(root, 0);
  bfs.scan(g, [&](std::uint32_t level, std::span<const Vertex> vertices) {
    for (Vertex v : vertices) out.level_of[v] = level;
  });
  out.depth0 = bfs.depth0();
  out.depth = out.depth0 + (out.depth0 % 2);
  return out;
}

std::uint32_t even_depth(std::uint32_t depth0) { return depth0 + (depth0 % 2); }

}  // namespace

BfsLevels bfs_levels(const Graph& g, Vertex root) {
  if (root >= g.num_vertices()) throw InputError("BFS root out of range");
  BfsLevels out = materialize_levels(GraphView(g), root);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (out.level_of[v] == 0) throw InputError("graph is disconnected: vertex " + std::to_string(v) + " unreachable");
  }
  return out;
}

BfsLevels bfs_levels(const AugmentedGraph& g) { return materialize_levels(g, g.dummy_var()); }

bool DeletionBand::deletes(std::uint32_t level) const {
  if (shallow || level == 0) return false;
  auto hit = [&](std::int64_t j) {
    return j >= 0 && j <= static_cast<std::int64_t>(depth / 2) && static_cast<std::uint32_t>(j % k) == chosen;
  };
  if (level % 2 == 0) return hit(level / 2 - 1) || hit(level / 2);
  return hit((level - 1) / 2);
}

BandLosses::BandLosses(std::uint32_t k) : k_(k), losses_(k, 0) {
  if (k < 2) throw InputError("band modulus k must be >= 2");
}

void BandLosses::add(std::uint32_t level, std::uint64_t clauses) {
  if (level < 2 || level % 2 != 0 || clauses == 0) return;
  const std::uint32_t j = level / 2;  // level 2j lies in U_{j-1} and U_j
  losses_[(j - 1) % k_] += clauses;
  losses_[j % k_] += clauses;
}

DeletionBand BandLosses::finish(std::uint32_t depth0) const {
  DeletionBand band;
  band.k = k_;
  band.depth = even_depth(depth0);
  band.shallow = band.depth < 2 * k_;
  band.losses.assign(k_, 0);
  if (band.shallow) return band;
  band.losses.assign(losses_.begin(), losses_.end());
  for (std::uint32_t i = 1; i < k_; ++i)
    if (band.losses[i] < band.losses[band.chosen]) band.chosen = i;
  band.clause_loss = band.losses[band.chosen];
  return band;
}

DeletionBand choose_deletion_band(const AugmentedGraph& g, const BfsLevels& levels, std::uint32_t k) {
  BandLosses losses(k);
  for (ClauseIndex j = 0; j < g.m(); ++j) losses.add(levels.level_of[g.n() + j], 1);
  return losses.finish(levels.depth0);
}

PartitionStream::PartitionStream(const Formula& formula, std::uint32_t k)
    : graph_(formula),
      k_(k),
      bfs_(graph_.dummy_var(),
           static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(graph_.active_vertices()))))) {
  if (k < 2) throw InputError("partition needs k >= 2, got " + std::to_string(k));
}

const DeletionBand& PartitionStream::band() const {
  if (planned_) return band_;
  BandLosses losses(k_);
  bfs_.scan(graph_, [&](std::uint32_t level, std::span<const Vertex> vertices) {
    if (level % 2 != 0) return;
    std::uint64_t clauses = 0;
    for (Vertex v : vertices) clauses += graph_.is_dummy(v) ? 0 : 1;
    losses.add(level, clauses);
  });
  if (bfs_.visited() != graph_.active_vertices()) {
    throw InvariantError("augmented incidence graph is not connected (" + std::to_string(bfs_.visited()) + " of " +
                         std::to_string(graph_.active_vertices()) + " vertices reached)");
  }
  band_ = losses.finish(bfs_.depth0());
  planned_ = true;
  return band_;
}

PartitionStream partition(const Formula& formula, std::uint32_t k) { return PartitionStream(formula, k); }

std::vector<PartData> collect_parts(const PartitionStream& parts) {
  std::vector<PartData> out;
  parts.scan([&](const PartView& p) {
    PartData d;
    d.clauses.assign(p.clauses.begin(), p.clauses.end());
    d.vars.assign(p.vars.begin(), p.vars.end());
    d.first_level = p.first_level;
    d.last_level = p.last_level;
    out.push_back(std::move(d));
  });
  return out;
}

Formula part_formula(const Formula& formula, const PartData& part) {
  std::vector<std::vector<Literal>> clauses;
  clauses.reserve(part.clauses.size());
  for (ClauseIndex j : part.clauses) {
    auto c = formula.clause(j);
    clauses.emplace_back(c.begin(), c.end());
  }
  return Formula(formula.num_vars(), clauses);
}

PartitionReport verify_partition(const Formula& formula, const std::vector<PartData>& parts, std::uint32_t k) {
  if (k < 2) throw InputError("partition needs k >= 2");
  const Var n = formula.num_vars();
  const auto m = static_cast<std::uint32_t>(formula.num_clauses());
  const std::uint32_t total = n + m + 2;
  const std::uint32_t dummy = n + m;

  // Explicit augmented graph.
  std::vector<std::vector<std::uint32_t>> adj(total);
  std::vector<std::uint32_t> uf(total);
  std::iota(uf.begin(), uf.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (ClauseIndex j = 0; j < m; ++j) {
    for (Literal lit : formula.clause(j)) {
      adj[n + j].push_back(lit.var() - 1);
      adj[lit.var() - 1].push_back(n + j);
      uf[find(n + j)] = find(lit.var() - 1);
    }
  }
  std::vector<bool> has_rep(total, false);
  for (ClauseIndex j = 0; j < m; ++j) {
    const std::uint32_t root = find(n + j);
    if (has_rep[root]) continue;
    has_rep[root] = true;
    adj[dummy].push_back(n + j);
    adj[n + j].push_back(dummy);
  }
  adj[dummy].push_back(dummy + 1);
  adj[dummy + 1].push_back(dummy);

  std::vector<std::uint32_t> level(total, 0);
  std::queue<std::uint32_t> queue;
  level[dummy] = 1;
  queue.push(dummy);
  std::uint32_t depth0 = 1;
  while (!queue.empty()) {
    const std::uint32_t u = queue.front();
    queue.pop();
    depth0 = std::max(depth0, level[u]);
    for (std::uint32_t w : adj[u]) {
      if (level[w] == 0) {
        level[w] = level[u] + 1;
        queue.push(w);
      }
    }
  }

  PartitionReport report;
  report.k = k;
  report.parts = parts.size();

  // Band losses per residue, from scratch.
  const std::uint32_t depth = depth0 + depth0 % 2;
  std::vector<std::uint64_t> losses(k, 0);
  if (depth >= 2 * k) {
    for (std::uint32_t i = 0; i < k; ++i) {
      std::vector<bool> deleted(depth + 3, false);
      for (std::uint32_t j = i; j <= depth / 2; j += k) deleted[2 * j] = deleted[2 * j + 1] = deleted[2 * j + 2] = true;
      for (ClauseIndex c = 0; c < m; ++c)
        if (deleted[level[n + c]]) ++losses[i];
    }
  }
  report.loss_sum = std::accumulate(losses.begin(), losses.end(), std::uint64_t{0});
  report.loss_sum_ok = report.loss_sum <= 2ull * m;
  report.min_loss = *std::min_element(losses.begin(), losses.end());
  report.min_loss_ok = report.min_loss * k <= 2ull * m;

  // Ownership.
  constexpr std::uint64_t kNone = ~std::uint64_t{0};
  std::vector<std::uint64_t> var_owner(n + 1, kNone);
  std::vector<std::uint64_t> clause_owner(m, kNone);
  auto fail = [&](Var v) {
    if (report.disjoint) report.witness_var = v;
    report.disjoint = false;
  };
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (Var v : parts[p].vars) {
      if (v < 1 || v > n) throw InputError("part references variable out of range");
      if (var_owner[v] != kNone) fail(v);
      var_owner[v] = p;
    }
    for (ClauseIndex c : parts[p].clauses) {
      if (c >= m) throw InputError("part references clause out of range");
      if (clause_owner[c] != kNone) fail(formula.clause(c)[0].var());
      clause_owner[c] = p;
    }
  }
  for (std::size_t p = 0; p < parts.size(); ++p) {
    std::uint32_t lo = ~0u;
    std::uint32_t hi = 0;
    for (ClauseIndex c : parts[p].clauses) {
      report.retained += 1;
      lo = std::min(lo, level[n + c]);
      hi = std::max(hi, level[n + c]);
      for (Literal lit : formula.clause(c))
        if (var_owner[lit.var()] != p) fail(lit.var());
    }
    for (Var v : parts[p].vars) {
      lo = std::min(lo, level[v - 1]);
      hi = std::max(hi, level[v - 1]);
    }
    if (lo <= hi) report.max_level_span = std::max(report.max_level_span, hi - lo + 1);
  }
  report.span_ok = report.max_level_span <= 2 * k - 3;
  report.retained_bound = (static_cast<std::uint64_t>(k - 2) * m + k - 1) / k;
  report.retained_ok = report.retained >= report.retained_bound;
  return report;
}

EulerCheck euler_check(const Formula& formula) {
  EulerCheck check;
  for (Var v = 1; v <= formula.num_vars(); ++v) check.vertices += formula.occurrences(v).empty() ? 0 : 1;
  check.vertices += formula.num_clauses();
  check.edges = formula.num_literals();
  check.plausible = check.vertices < 3 || check.edges + 4 <= 2 * check.vertices;
  return check;
}

}  // namespace sublin
