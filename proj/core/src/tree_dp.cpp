#include "sublin/tree_dp.hpp"

#include <algorithm>
#include <string>

#include "sublin/errors.hpp"

namespace sublin {

LocalInstance::LocalInstance(const Formula& formula, std::span<const ClauseIndex> clauses,
                             std::span<const Var> vars)
    : f_(&formula), clauses_(clauses), vars_(vars) {}

std::uint32_t LocalInstance::local_var(Var var) const {
  if (whole_) return var - 1;
  auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
  if (it == vars_.end() || *it != var) {
    throw InvariantError("variable " + std::to_string(var) + " is not part of the instance");
  }
  return static_cast<std::uint32_t>(it - vars_.begin());
}

Graph LocalInstance::graph() const {
  aux_vector<std::pair<Vertex, Vertex>> edges;
  const std::uint32_t nv = num_vars();
  for (std::uint32_t c = 0; c < num_clauses(); ++c) {
    for (Literal lit : f_->clause(global_clause(c))) edges.emplace_back(local_var(lit.var()), nv + c);
  }
  return Graph(num_vertices(), {edges.data(), edges.size()});
}

namespace {

class DpEngine {
 public:
  DpEngine(const TreeDecomposition& td, const LocalInstance& inst) : td_(td), inst_(inst), nv_(inst.num_vars()) {}

  template <class Sink>
  std::uint64_t run(Sink&& sink) {
    if (td_.num_nodes() == 0) {
      if (inst_.num_vertices() > 0) throw InvariantError("empty decomposition for a non-empty instance");
      return 0;
    }
    // Witness pass: solve each node's subtree under the fixed ancestors,
    // then fix the node's best extension and descend.
    struct Visit {
      std::uint32_t node;
      std::uint32_t child;
      bool opened;
    };
    aux_vector<Visit> stack{{td_.root(), 0, false}};
    std::uint64_t root_value = 0;
    bool first = true;
    while (!stack.empty()) {
      if (!stack.back().opened) {
        const std::uint32_t node = stack.back().node;
        const auto [value, mask] = solve_subtree(node);
        if (first) {
          root_value = value;
          first = false;
        }
        open_segment(node);
        set_segment(segs_.back(), mask);
        const Segment s = segs_.back();
        for (std::uint32_t i = s.begin; i < s.end; ++i) sink(psi_var_[i], psi_val_[i] != 0);
        stack.back().opened = true;
      }
      Visit& top = stack.back();
      const auto children = td_.children(top.node);
      if (top.child < children.size()) {
        const std::uint32_t next = children[top.child++];
        stack.push_back({next, 0, false});
        continue;
      }
      close_segment();
      stack.pop_back();
    }
    return root_value;
  }

  std::uint64_t node_visits() const { return node_visits_; }
  std::uint32_t max_free() const { return max_free_; }

 private:
  struct Segment {
    std::uint32_t begin, end;
  };
  struct Frame {
    std::uint32_t node;
    std::uint32_t free;
    std::uint32_t child;
    bool fresh;
    bool have_best;
    std::uint64_t mask;
    std::uint64_t sum;
    std::uint64_t best;
    std::uint64_t best_mask;
  };

  bool owned(std::uint32_t node, Vertex u) const {
    const std::uint32_t p = td_.parent(node);
    return p == TreeDecomposition::kNoParent || !td_.bag_contains(p, u);
  }

  int lookup(Var var, std::size_t segments) const {
    for (std::size_t s = segments; s-- > 0;) {
      const Segment seg = segs_[s];
      auto first = psi_var_.begin() + seg.begin;
      auto last = psi_var_.begin() + seg.end;
      auto it = std::lower_bound(first, last, var);
      if (it != last && *it == var) return psi_val_[static_cast<std::size_t>(it - psi_var_.begin())];
    }
    return -1;
  }

  // Pushes the sorted variables a node fixes: those of its bag and of the
  // clauses it owns, minus everything already fixed above it.
  void open_segment(std::uint32_t node) {
    const auto begin = static_cast<std::uint32_t>(psi_var_.size());
    for (Vertex u : td_.bag(node)) {
      if (u < nv_) {
        psi_var_.push_back(inst_.global_var(u));
      } else if (u < inst_.num_vertices() && owned(node, u)) {
        for (Literal lit : inst_.formula().clause(inst_.global_clause(u - nv_))) psi_var_.push_back(lit.var());
      }
    }
    std::sort(psi_var_.begin() + begin, psi_var_.end());
    psi_var_.erase(std::unique(psi_var_.begin() + begin, psi_var_.end()), psi_var_.end());
    const std::size_t below = segs_.size();
    auto keep = psi_var_.begin() + begin;
    for (auto it = keep; it != psi_var_.end(); ++it)
      if (lookup(*it, below) < 0) *keep++ = *it;
    psi_var_.erase(keep, psi_var_.end());
    psi_val_.resize(psi_var_.size(), 0);
    const auto end = static_cast<std::uint32_t>(psi_var_.size());
    if (end - begin > kDpMaxFreeVars) {
      throw InvariantError("decomposition node fixes " + std::to_string(end - begin) + " variables (limit " +
                           std::to_string(kDpMaxFreeVars) + ")");
    }
    max_free_ = std::max(max_free_, end - begin);
    segs_.push_back({begin, end});
  }

  void close_segment() {
    const Segment s = segs_.back();
    segs_.pop_back();
    psi_var_.resize(s.begin);
    psi_val_.resize(s.begin);
  }

  // The first variable of the segment is the most significant bit.
  void set_segment(const Segment& s, std::uint64_t mask) {
    const std::uint32_t f = s.end - s.begin;
    for (std::uint32_t i = 0; i < f; ++i) psi_val_[s.begin + i] = static_cast<std::uint8_t>((mask >> (f - 1 - i)) & 1u);
  }

  std::uint64_t owned_satisfied(std::uint32_t node) const {
    std::uint64_t count = 0;
    for (Vertex u : td_.bag(node)) {
      if (u < nv_ || u >= inst_.num_vertices() || !owned(node, u)) continue;
      bool sat = false;
      for (Literal lit : inst_.formula().clause(inst_.global_clause(u - nv_))) {
        const int value = lookup(lit.var(), segs_.size());
        if (value < 0) throw InvariantError("clause variable not fixed at its owning node");
        if (lit.holds(value != 0)) {
          sat = true;
          break;
        }
      }
      count += sat ? 1 : 0;
    }
    return count;
  }

  // Value of the subtree at `start` under the current ψ, and the best
  // extension mask of `start` itself (smallest among ties).
  std::pair<std::uint64_t, std::uint64_t> solve_subtree(std::uint32_t start) {
    auto push = [&](std::uint32_t node) {
      open_segment(node);
      const Segment s = segs_.back();
      frames_.push_back(Frame{node, s.end - s.begin, 0, true, false, 0, 0, 0, 0});
      ++node_visits_;
    };
    const std::size_t base = frames_.size();
    push(start);
    std::uint64_t returned = 0;
    bool has_return = false;
    std::pair<std::uint64_t, std::uint64_t> result{0, 0};
    while (frames_.size() > base) {
      Frame& fr = frames_.back();
      if (has_return) {
        fr.sum += returned;
        ++fr.child;
        has_return = false;
      } else if (fr.fresh) {
        fr.fresh = false;
        set_segment(segs_.back(), fr.mask);
        fr.sum = owned_satisfied(fr.node);
        fr.child = 0;
      }
      const auto children = td_.children(fr.node);
      if (fr.child < children.size()) {
        push(children[fr.child]);
        continue;
      }
      if (!fr.have_best || fr.sum > fr.best) {
        fr.have_best = true;
        fr.best = fr.sum;
        fr.best_mask = fr.mask;
      }
      if (fr.free < 64 && fr.mask + 1 < (std::uint64_t{1} << fr.free)) {
        ++fr.mask;
        fr.fresh = true;
        continue;
      }
      returned = fr.best;
      result = {fr.best, fr.best_mask};
      close_segment();
      frames_.pop_back();
      has_return = frames_.size() > base;
    }
    return result;
  }

  const TreeDecomposition& td_;
  const LocalInstance& inst_;
  std::uint32_t nv_;
  aux_vector<Var> psi_var_;
  aux_vector<std::uint8_t> psi_val_;
  aux_vector<Segment> segs_;
  aux_vector<Frame> frames_;
  std::uint64_t node_visits_ = 0;
  std::uint32_t max_free_ = 0;
};

}  // namespace

DpResult bdtw_maxsat(const TreeDecomposition& td, const LocalInstance& instance) {
  DpResult result;
  result.assignment = Assignment::constant(instance.formula().num_vars(), false);
  DpEngine engine(td, instance);
  result.count = engine.run([&](Var v, bool value) { result.assignment.set(v, value); });
  result.node_visits = engine.node_visits();
  result.max_free_vars = engine.max_free();
  return result;
}

DpResult bdtw_maxsat(const TreeDecomposition& td, const Formula& formula) {
  return bdtw_maxsat(td, LocalInstance::whole(formula));
}

PtasResult planar_ptas(const Formula& formula, std::uint64_t eps_num, std::uint64_t eps_den) {
  if (eps_den == 0 || eps_num == 0 || eps_num >= eps_den) throw InputError("epsilon must lie in (0, 1)");
  PtasResult result;
  const std::uint64_t k = (2 * eps_den + eps_num - 1) / eps_num;
  if (k > (1u << 30)) throw InputError("epsilon too small");
  result.k = static_cast<std::uint32_t>(k);
  result.assignment = Assignment::constant(formula.num_vars(), false);

  const PartitionStream parts(formula, result.k);
  const DeletionBand& band = parts.band();
  result.depth0 = parts.depth0();
  result.shallow = band.shallow;
  result.chosen_residue = band.chosen;
  result.clause_loss = band.clause_loss;

  parts.scan([&](const PartView& part) {
    const LocalInstance inst(formula, part.clauses, part.vars);
    const TreeDecomposition td = rebalance(tree_decompose(inst.graph()));
    DpEngine engine(td, inst);
    const std::uint64_t optimum = engine.run([&](Var v, bool value) { result.assignment.set(v, value); });
    PartStat stat;
    stat.clauses = static_cast<std::uint32_t>(part.clauses.size());
    stat.vars = static_cast<std::uint32_t>(part.vars.size());
    stat.width = td.width();
    stat.depth = td.depth();
    stat.nodes = td.num_nodes();
    stat.optimum = optimum;
    stat.node_visits = engine.node_visits();
    result.parts.push_back(stat);
    result.retained += stat.clauses;
    result.parts_optimum += optimum;
  });
  result.satisfied = eval_assignment(formula, result.assignment);
  return result;
}

}  // namespace sublin
