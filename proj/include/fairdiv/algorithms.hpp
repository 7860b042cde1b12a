#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/allocation.hpp"
#include "fairdiv/error.hpp"
#include "fairdiv/graph.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

enum class Phase { Greedy, TsSubroutine, WtsSubroutine, CaseI, CaseII, WtsCase1, WtsCase2, Forest };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::Greedy: return "greedy";
    case Phase::TsSubroutine: return "ts-subroutine";
    case Phase::WtsSubroutine: return "wts-subroutine";
    case Phase::CaseI: return "case-I";
    case Phase::CaseII: return "case-II";
    case Phase::WtsCase1: return "wts-case-1";
    case Phase::WtsCase2: return "wts-case-2";
    case Phase::Forest: return "forest";
  }
  return "?";
}

enum class CaseTag { CaseI, CaseII, Ef1WtsCase1, Ef1WtsCase2, Forest1, Forest2, Forest3 };

inline const char* to_string(CaseTag t) {
  switch (t) {
    case CaseTag::CaseI: return "case-I";
    case CaseTag::CaseII: return "case-II";
    case CaseTag::Ef1WtsCase1: return "case-1";
    case CaseTag::Ef1WtsCase2: return "case-2";
    case CaseTag::Forest1: return "forest-case-1";
    case CaseTag::Forest2: return "forest-case-2";
    case CaseTag::Forest3: return "forest-case-3";
  }
  return "?";
}

/// One item transfer. `invocation` numbers subroutine calls within a solve.
struct MoveRecord {
  Phase phase;
  int invocation = 0;
  Vertex item = 0;
  std::optional<int> from;
  int to = 0;
  Potential phi_before, phi_after;
  Value welfare_before = 0, welfare_after = 0;
};

/// One execution of an outer-loop case, with the potential around it.
struct CaseRecord {
  CaseTag tag;
  Potential phi_before, phi_after;
};

struct SolveTrace {
  std::size_t iterations = 0;
  std::vector<CaseTag> case_history;
  std::vector<Potential> potential_history;  // after every move, starting with the initial state
  std::vector<Value> welfare_history;        // aligned with potential_history
  std::vector<MoveRecord> moves;
  std::vector<CaseRecord> cases;
  int subroutine_invocations = 0;
  std::size_t leaf_roots_seen = 0;  // forest solver: frontier roots that were leaves

  std::size_t count(CaseTag t) const { return std::count(case_history.begin(), case_history.end(), t); }
};

struct SolveResult {
  Allocation allocation;
  SolveTrace trace;
  std::string algorithm;
  std::string guarantee;
};

/// Observer for the forest solver: called after every completed case with
/// the current (partial) state, in core-vertex indices.
struct ForestStep {
  CaseTag tag;
  const BundleStats& stats;
  const RootedForest& forest;
};

struct SolveOptions {
  std::function<void(const ForestStep&)> on_forest_step;
};

namespace detail {

/// Bundle stats plus the current relabelling: order[p] is the bundle at
/// position p when bundles are sorted by non-decreasing value.
class Workspace {
 public:
  Workspace(const Graph& g, int n, SolveTrace& trace) : stats(g, n), order(n), trace_(&trace) {
    std::iota(order.begin(), order.end(), 0);
  }

  BundleStats stats;
  std::vector<int> order;

  int num_bundles() const { return stats.num_bundles(); }
  const Graph& graph() const { return stats.graph(); }

  /// Stable relabelling: equal values keep their previous relative order.
  void relabel() {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return stats.value(a) < stats.value(b); });
  }

  int position_of(int bundle) const {
    return static_cast<int>(std::find(order.begin(), order.end(), bundle) - order.begin());
  }

  Potential phi() const { return potential_of(stats.values()); }

  void snapshot() {
    trace_->potential_history.push_back(phi());
    trace_->welfare_history.push_back(stats.social_welfare());
  }

  void move(Vertex o, int to, Phase phase, int invocation) {
    MoveRecord rec{phase, invocation, o, stats.bundle_of(o), to, phi(), {}, stats.social_welfare(), 0};
    stats.move(o, to);
    rec.phi_after = phi();
    rec.welfare_after = stats.social_welfare();
    trace_->moves.push_back(rec);
    snapshot();
  }

  void round_robin() {
    for (Vertex o = 0; o < graph().num_vertices(); ++o) stats.move(o, o % num_bundles());
  }

  /// Positions (>= 1) of bundles the least-valued bundle EF1-envies.
  std::vector<int> ef1_envied_positions() const {
    const Value lo = stats.value(order[0]);
    const auto drops = min_drop_items(stats);
    std::vector<int> out;
    for (int p = 1; p < num_bundles(); ++p) {
      int b = order[p];
      if (stats.value(b) > lo && drop_value(drops[b]) > lo) out.push_back(p);
    }
    return out;
  }

  SolveTrace& trace() { return *trace_; }

 private:
  SolveTrace* trace_;
};

inline void check_budget(std::size_t used, std::size_t budget, const char* what) {
  if (used > budget)
    throw InvariantError(std::string(what) + ": iteration budget " + std::to_string(budget) + " exceeded");
}

/// Strip isolated vertices; remember the map back to the input graph.
struct Core {
  Graph graph;
  std::vector<Vertex> to_original;
  std::vector<Vertex> isolated;
};

inline Core strip_isolated(const Graph& g) {
  Core c;
  std::vector<Vertex> to_core(g.num_vertices(), -1);
  for (Vertex o = 0; o < g.num_vertices(); ++o) {
    if (g.degree(o) == 0) {
      c.isolated.push_back(o);
    } else {
      to_core[o] = static_cast<Vertex>(c.to_original.size());
      c.to_original.push_back(o);
    }
  }
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) edges.push_back({to_core[u], to_core[v]});
  c.graph = Graph(static_cast<Vertex>(c.to_original.size()), std::move(edges));
  return c;
}

/// Map a core allocation back and deal isolated vertices round-robin.
inline Allocation lift(const Core& c, const Graph& original, const Allocation& core_alloc) {
  const int n = core_alloc.num_agents();
  std::vector<std::vector<Vertex>> bundles(n);
  for (int i = 0; i < n; ++i)
    for (Vertex o : core_alloc.bundle(i)) bundles[i].push_back(c.to_original[o]);
  for (std::size_t k = 0; k < c.isolated.size(); ++k) bundles[k % n].push_back(c.isolated[k]);
  return Allocation(original.num_vertices(), std::move(bundles));
}

inline void lift_trace(const Core& c, SolveTrace& t) {
  for (auto& m : t.moves) m.item = c.to_original[m.item];
}

template <typename Solver>
SolveResult solve_on_core(const Graph& g, int n, Vertex min_core, const char* name, Solver solver) {
  FAIRDIV_REQUIRE(n >= 1, "need at least one agent");
  Core core = strip_isolated(g);
  FAIRDIV_REQUIRE(core.graph.num_vertices() >= min_core,
                  std::string(name) + ": needs at least " + std::to_string(min_core) +
                      " non-isolated vertices, got " + std::to_string(core.graph.num_vertices()));
  SolveResult r = solver(core.graph);
  r.allocation = lift(core, g, r.allocation);
  lift_trace(core, r.trace);
  return r;
}

inline Allocation finish(const Workspace& ws) {
  std::vector<std::vector<Vertex>> out;
  const auto& s = ws.stats;
  for (int b : sorted_order(s.values())) out.push_back(s.members(b));
  return Allocation(s.num_vertices(), std::move(out));
}

// ---------------------------------------------------------------------------
// Subroutines on a workspace

/**
 * Moves weak or strict chores (v(A_i) <= v(A_i - o)) to bundles valuing
 * them strictly positively, never into `special`. Every move raises the
 * welfare by at least one, so at most 2|E| moves happen.
 */
inline void ts_subroutine(Workspace& ws, std::optional<int> special) {
  auto& trace = ws.trace();
  const int invocation = ++trace.subroutine_invocations;
  const auto& s = ws.stats;
  const int n = ws.num_bundles();
  const std::size_t budget = static_cast<std::size_t>(2 * ws.graph().num_edges());
  std::size_t moves = 0;
  std::vector<int> pos(n);
  for (;;) {
    ws.relabel();
    for (int p = 0; p < n; ++p) pos[ws.order[p]] = p;
    // Donor: least position, then least item, holding a non-positive item.
    std::optional<Vertex> pick;
    for (Vertex o = 0; o < s.num_vertices(); ++o) {
      int b = s.assignment()[o];
      if (s.raw_marginal(o, b) > 0) continue;
      if (!pick || pos[b] < pos[s.assignment()[*pick]]) pick = o;
    }
    if (!pick) return;
    const Vertex o = *pick;
    const int donor_pos = pos[s.assignment()[o]];
    auto receives = [&](int b) { return b != special && s.assignment()[o] != b && s.raw_marginal(o, b) > 0; };
    std::optional<int> target;
    if (donor_pos != 0 && receives(ws.order[0])) target = ws.order[0];
    for (int p = 0; p < n && !target; ++p)
      if (receives(ws.order[p])) target = ws.order[p];
    FAIRDIV_INVARIANT(target.has_value(), "ts-subroutine: no bundle other than the special one values item " +
                                              std::to_string(o) + " positively");
    ws.move(o, *target, Phase::TsSubroutine, invocation);
    check_budget(++moves, budget, "ts-subroutine");
  }
}

/**
 * Moves strict chores (v(A_i) < v(A_i - o)): from any bundle but the
 * least-valued one into the least-valued one, and from the least-valued
 * one into the second. Each move lexicographically raises the potential.
 */
inline void wts_subroutine(Workspace& ws) {
  auto& trace = ws.trace();
  const int invocation = ++trace.subroutine_invocations;
  const auto& s = ws.stats;
  const int n = ws.num_bundles();
  if (n < 2) return;
  const std::size_t budget = static_cast<std::size_t>(2 * ws.graph().num_edges() * n);
  std::size_t moves = 0;
  std::vector<int> pos(n);
  for (;;) {
    ws.relabel();
    for (int p = 0; p < n; ++p) pos[ws.order[p]] = p;
    std::optional<Vertex> pick;
    for (Vertex o = 0; o < s.num_vertices(); ++o) {
      int b = s.assignment()[o];
      if (s.raw_marginal(o, b) >= 0) continue;
      if (!pick || pos[b] < pos[s.assignment()[*pick]]) pick = o;
    }
    if (!pick) return;
    const Vertex o = *pick;
    const int target = pos[s.assignment()[o]] == 0 ? ws.order[1] : ws.order[0];
    FAIRDIV_INVARIANT(s.raw_marginal(o, target) > 0,
                      "wts-subroutine: strict chore " + std::to_string(o) + " is not a strict good for its receiver");
    ws.move(o, target, Phase::WtsSubroutine, invocation);
    check_budget(++moves, budget, "wts-subroutine");
  }
}

inline Workspace workspace_from(const Graph& g, const Allocation& a, SolveTrace& trace) {
  FAIRDIV_REQUIRE(a.num_vertices() == g.num_vertices(), "allocation does not match the graph");
  Workspace ws(g, a.num_agents(), trace);
  ws.stats = make_stats(g, a);
  return ws;
}

/// Allocation in the workspace's current labelling (bundle ids, not positions).
inline Allocation current(const Workspace& ws) { return Allocation::from_stats(ws.stats); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Public subroutine entry points

/// TS-subroutine on a complete allocation with n >= 4. `special` indexes a
/// bundle of `a` that never receives an item. Output bundles keep the
/// input's indexing.
inline SolveResult ts_subroutine(const Graph& g, const Allocation& a, std::optional<int> special = std::nullopt) {
  FAIRDIV_REQUIRE(a.complete(), "ts-subroutine needs a complete allocation");
  FAIRDIV_REQUIRE(a.num_agents() >= 4, "ts-subroutine needs at least four agents");
  if (special) FAIRDIV_REQUIRE(*special >= 0 && *special < a.num_agents(), "special agent out of range");
  SolveResult r;
  auto ws = detail::workspace_from(g, a, r.trace);
  ws.snapshot();
  detail::ts_subroutine(ws, special);
  r.allocation = detail::current(ws);
  r.algorithm = "ts-subroutine";
  r.guarantee = "TS";
  return r;
}

/// wTS-subroutine on a complete allocation with n >= 2. Bundles keep the
/// input's indexing.
inline SolveResult wts_subroutine(const Graph& g, const Allocation& a) {
  FAIRDIV_REQUIRE(a.complete(), "wts-subroutine needs a complete allocation");
  FAIRDIV_REQUIRE(a.num_agents() >= 2, "wts-subroutine needs at least two agents");
  SolveResult r;
  auto ws = detail::workspace_from(g, a, r.trace);
  ws.snapshot();
  detail::wts_subroutine(ws);
  r.allocation = detail::current(ws);
  r.algorithm = "wts-subroutine";
  r.guarantee = "wTS";
  return r;
}

// ---------------------------------------------------------------------------
// Two agents

/// First-improvement local search for the cut from (V, {}), scanning
/// vertices by index until no single move raises the cut.
inline SolveResult greedy_two_agents(const Graph& g) {
  return detail::solve_on_core(g, 2, 2, "greedy-two-agents", [](const Graph& core) {
    SolveResult r;
    detail::Workspace ws(core, 2, r.trace);
    for (Vertex o = 0; o < core.num_vertices(); ++o) ws.stats.move(o, 0);
    ws.snapshot();
    const auto budget = static_cast<std::size_t>(2 * core.num_edges());
    std::size_t moves = 0;
    for (bool improved = true; improved;) {
      improved = false;
      ++r.trace.iterations;
      for (Vertex o = 0; o < core.num_vertices(); ++o) {
        int b = ws.stats.assignment()[o];
        if (ws.stats.marginal_remove(b, o) > 0) {
          ws.move(o, 1 - b, Phase::Greedy, 0);
          improved = true;
          detail::check_budget(++moves, budget, "greedy-two-agents");
        }
      }
    }
    r.allocation = detail::current(ws);
    r.algorithm = "greedy-two-agents";
    r.guarantee = "EF+TS";
    return r;
  });
}

// ---------------------------------------------------------------------------
// EF1 + TS for n >= 4

inline SolveResult solve_ef1_ts_n4(const Graph& g, int n) {
  FAIRDIV_REQUIRE(n >= 4, "EF1+TS local search needs at least four agents");
  return detail::solve_on_core(g, n, n, "ef1-ts", [n](const Graph& core) {
    SolveResult r;
    detail::Workspace ws(core, n, r.trace);
    auto& s = ws.stats;
    const auto m = static_cast<std::size_t>(core.num_vertices());
    const std::size_t budget = 8 * m * m * static_cast<std::size_t>(n);
    ws.round_robin();
    ws.snapshot();
    ws.relabel();
    detail::ts_subroutine(ws, std::nullopt);

    auto record = [&](CaseTag tag, Potential before) {
      r.trace.case_history.push_back(tag);
      r.trace.cases.push_back({tag, before, ws.phi()});
      detail::check_budget(r.trace.cases.size(), budget, "ef1-ts");
    };

    for (;;) {
      ++r.trace.iterations;
      ws.relabel();
      auto envied = ws.ef1_envied_positions();
      if (envied.empty()) break;

      // Case I: an envied bundle holds a strict good for the least bundle.
      for (;;) {
        const int first = ws.order[0];
        std::optional<Vertex> give;
        for (int p : envied) {
          for (Vertex o : s.members(ws.order[p]))
            if (s.raw_marginal(o, first) > 0) {
              give = o;
              break;
            }
          if (give) break;
        }
        if (!give) break;
        const Potential before = ws.phi();
        ws.move(*give, first, Phase::CaseI, 0);
        ws.relabel();
        detail::ts_subroutine(ws, std::nullopt);
        record(CaseTag::CaseI, before);
        ws.relabel();
        envied = ws.ef1_envied_positions();
      }
      if (envied.empty()) continue;

      // Case II: the single envied bundle holds only chores for the least bundle.
      FAIRDIV_INVARIANT(envied.size() == 1, "case II with " + std::to_string(envied.size()) + " EF1-envied bundles");
      const int first = ws.order[0];
      const int special = ws.order[envied.front()];
      const Potential before = ws.phi();
      auto violated = [&] {
        if (s.value(special) <= s.value(first)) return false;
        auto d = min_drop_item(s, special);
        if (drop_value(d) <= s.value(first)) return false;
        for (Vertex o : s.members(special))
          if (s.raw_marginal(o, first) > 0) return false;
        return true;
      };
      while (violated()) {
        const Vertex o = s.members(special).front();
        std::optional<int> target;
        for (int p = 1; p < n && !target; ++p) {
          int b = ws.order[p];
          if (b != special && s.raw_marginal(o, b) > 0) target = b;
        }
        FAIRDIV_INVARIANT(target.has_value(), "case II: no receiver for item " + std::to_string(o));
        ws.move(o, *target, Phase::CaseII, 0);
      }
      ws.relabel();
      detail::ts_subroutine(ws, special);
      record(CaseTag::CaseII, before);
    }
    r.allocation = detail::finish(ws);
    r.algorithm = "ef1-ts-local-search";
    r.guarantee = "EF1+TS";
    return r;
  });
}

// ---------------------------------------------------------------------------
// EF1 + wTS for any n

inline SolveResult solve_ef1_wts(const Graph& g, int n) {
  FAIRDIV_REQUIRE(n >= 1, "need at least one agent");
  return detail::solve_on_core(g, n, n, "ef1-wts", [n](const Graph& core) {
    SolveResult r;
    r.algorithm = "ef1-wts-local-search";
    r.guarantee = "EF1+wTS";
    detail::Workspace ws(core, n, r.trace);
    auto& s = ws.stats;
    ws.round_robin();
    ws.snapshot();
    if (n == 1) {
      r.allocation = detail::finish(ws);
      return r;
    }
    const auto m = static_cast<std::size_t>(core.num_vertices());
    const std::size_t budget = 8 * m * m * static_cast<std::size_t>(n);
    ws.relabel();
    detail::wts_subroutine(ws);

    for (;;) {
      ++r.trace.iterations;
      ws.relabel();
      const auto envied = ws.ef1_envied_positions();
      if (envied.empty()) break;
      const int first = ws.order[0];
      const Potential before = ws.phi();

      std::optional<Vertex> give;
      for (int p : envied) {
        for (Vertex o : s.members(ws.order[p]))
          if (s.raw_marginal(o, first) > 0) {
            give = o;
            break;
          }
        if (give) break;
      }

      CaseTag tag;
      if (give) {
        tag = CaseTag::Ef1WtsCase1;
        ws.move(*give, first, Phase::WtsCase1, 0);
      } else {
        tag = CaseTag::Ef1WtsCase2;
        FAIRDIV_INVARIANT(envied.size() == 1, "case 2 with " + std::to_string(envied.size()) + " EF1-envied bundles");
        FAIRDIV_INVARIANT(n >= 3, "case 2 reached with two agents");
        const int victim = ws.order[envied.front()];
        const auto items = s.members(victim);
        // Grow S inside the envied bundle by positive-marginal items until v(S) > v(A_1).
        std::vector<bool> in_s(core.num_vertices(), false);
        std::vector<int> nbrs_in_s(core.num_vertices(), 0);
        Value value_s = 0;
        while (value_s <= s.value(first)) {
          std::optional<Vertex> add;
          for (Vertex o : items)
            if (!in_s[o] && core.degree(o) - 2 * nbrs_in_s[o] > 0) {
              add = o;
              break;
            }
          FAIRDIV_INVARIANT(add.has_value(), "case 2: no positive-marginal item left while v(S) <= v(A_1)");
          value_s += core.degree(*add) - 2 * nbrs_in_s[*add];
          in_s[*add] = true;
          for (Vertex w : core.neighbors(*add)) ++nbrs_in_s[w];
        }
        int receiver = -1;
        for (int p = 1; p < n && receiver < 0; ++p)
          if (p != envied.front()) receiver = ws.order[p];
        for (Vertex o : items)
          if (!in_s[o]) ws.move(o, receiver, Phase::WtsCase2, 0);
      }
      ws.relabel();
      detail::wts_subroutine(ws);
      r.trace.case_history.push_back(tag);
      r.trace.cases.push_back({tag, before, ws.phi()});
      detail::check_budget(r.trace.cases.size(), budget, "ef1-wts");
    }
    r.allocation = detail::finish(ws);
    FAIRDIV_INVARIANT(r.allocation.all_nonempty(), "ef1-wts produced an empty bundle");
    return r;
  });
}

// ---------------------------------------------------------------------------
// Forests: EF1 + SO

namespace detail {

/// Proper 2-colouring of a forest: BFS from the least vertex of each tree.
inline Allocation forest_bipartition(const Graph& g) {
  const RootedForest f = root_forest(g);
  std::vector<int> colour(g.num_vertices(), 0);
  for (Vertex r : f.tree_roots) {
    std::vector<Vertex> stack{r};
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex c : f.children[u]) {
        colour[c] = 1 - colour[u];
        stack.push_back(c);
      }
    }
  }
  return Allocation::from_assignment(2, colour);
}

class ForestPeeler {
 public:
  ForestPeeler(const Graph& g, int n, SolveResult& r, const SolveOptions& opts)
      : g_(g), n_(n), r_(r), opts_(opts), forest_(root_forest(g)), ws_(g, n, r.trace) {}

  void run() {
    const std::size_t budget = 4 * static_cast<std::size_t>(g_.num_vertices());
    ws_.snapshot();
    while (!forest_.frontier.empty()) {
      ++r_.trace.iterations;
      check_budget(r_.trace.iterations, budget, "forest");
      ws_.relabel();
      for (Vertex root : forest_.frontier)
        if (forest_.parent[root] && g_.degree(root) == 1) ++r_.trace.leaf_roots_seen;

      const Potential before = ws_.phi();
      CaseTag tag = step();
      r_.trace.case_history.push_back(tag);
      r_.trace.cases.push_back({tag, before, ws_.phi()});
      if (opts_.on_forest_step) opts_.on_forest_step(ForestStep{tag, ws_.stats, forest_});
    }
    FAIRDIV_INVARIANT(ws_.stats.complete(), "forest frontier exhausted with unallocated items");
  }

  const Workspace& workspace() const { return ws_; }

 private:
  const BundleStats& s() const { return ws_.stats; }

  bool feasible(Vertex root, int bundle) const {
    const auto& p = forest_.parent[root];
    return !p || s().assignment()[*p] != bundle;
  }

  std::optional<Vertex> feasible_root(int bundle) const {
    for (Vertex root : forest_.frontier)
      if (feasible(root, bundle)) return root;
    return std::nullopt;
  }

  void give(Vertex o, int bundle) {
    forest_.allocate(o);
    ws_.move(o, bundle, Phase::Forest, 0);
  }

  std::vector<Vertex> leaf_children(Vertex o) const {
    std::vector<Vertex> out;
    for (Vertex c : forest_.unallocated_children(o))
      if (g_.degree(c) == 1) out.push_back(c);
    return out;
  }

  /// Least-valued bundle among `pool`; on ties prefer one whose tie-mates
  /// include a bundle that still has a feasible root.
  int pick_leaf_receiver(const std::vector<int>& pool) const {
    Value lo = s().value(pool.front());
    for (int b : pool) lo = std::min(lo, s().value(b));
    std::vector<int> ties;
    for (int b : pool)
      if (s().value(b) == lo) ties.push_back(b);
    if (ties.size() >= 2) {
      for (int j : ties)
        for (int k : ties)
          if (k != j && feasible_root(k)) return j;
    }
    return ties.front();
  }

  void deal_leaf_children(Vertex o_t, const std::vector<int>& pool) {
    for (Vertex leaf : leaf_children(o_t)) give(leaf, pick_leaf_receiver(pool));
  }

  /// Highest-degree frontier root, least vertex on ties.
  Vertex heaviest_root() const {
    Vertex best = *forest_.frontier.begin();
    for (Vertex root : forest_.frontier)
      if (g_.degree(root) > g_.degree(best)) best = root;
    return best;
  }

  void feed_children_while(Vertex o_t, int receiver, const std::function<bool()>& needs_more) {
    while (needs_more()) {
      auto kids = forest_.unallocated_children(o_t);
      FAIRDIV_INVARIANT(!kids.empty(), "forest: ran out of children of " + std::to_string(o_t) + " to compensate");
      give(kids.front(), receiver);
    }
  }

  CaseTag step() {
    const auto& order = ws_.order;
    // Case 1: some least-valued bundle has a feasible root.
    const Value lo = s().value(order[0]);
    for (int p = 0; p < n_ && s().value(order[p]) == lo; ++p) {
      const int first = order[p];
      if (auto root = feasible_root(first)) {
        give(*root, first);
        std::vector<int> pool;
        for (int b : order)
          if (b != first) pool.push_back(b);
        deal_leaf_children(*root, pool);
        return CaseTag::Forest1;
      }
    }

    // Every frontier root hangs below the least bundle now.
    const int first = order[0];
    const int second = order[1];
    const Vertex o_t = heaviest_root();
    const auto drop2 = min_drop_item(s(), second);
    const Value v_drop2 = drop_value(drop2);
    const Value v_o2 = drop2 ? g_.degree(drop2->item) : 0;

    // Case 2: the heaviest root goes to the second bundle.
    if (feasible(o_t, second) && (s().value(first) > v_drop2 || g_.degree(o_t) > v_o2)) {
      give(o_t, second);
      const auto h2 = min_drop_item(s(), second);
      std::vector<int> pool{first};
      for (int p = 2; p < n_; ++p) pool.push_back(order[p]);
      deal_leaf_children(o_t, pool);
      feed_children_while(o_t, first, [&] { return s().value(first) < s().value(second) + s().marginal_remove(second, h2->item); });
      return CaseTag::Forest2;
    }

    // Case 3: some bundle beyond the second absorbs the root.
    std::optional<int> pick;
    Value best = 0;
    for (int p = 2; p < n_; ++p) {
      Value dv = drop_value(min_drop_item(s(), order[p]));
      if (!pick || dv < best) {
        pick = order[p];
        best = dv;
      }
    }
    if (pick && s().value(first) > best && feasible(o_t, *pick)) {
      const int j = *pick;
      const auto old_drop = min_drop_item(s(), j);
      give(o_t, j);
      for (Vertex leaf : leaf_children(o_t)) give(leaf, first);
      auto target_j = [&] { return s().value(j) + (old_drop ? s().marginal_remove(j, old_drop->item) : 0); };
      feed_children_while(o_t, first, [&] { return s().value(first) < std::min(s().value(second), target_j()); });
      return CaseTag::Forest3;
    }
    throw InvariantError("forest: no case applies with " + std::to_string(forest_.frontier.size()) +
                         " frontier roots left");
  }

  const Graph& g_;
  int n_;
  SolveResult& r_;
  const SolveOptions& opts_;
  RootedForest forest_;
  Workspace ws_;
};

}  // namespace detail

/// EF1 + SO on forests: bipartition for two agents, root peeling otherwise.
inline SolveResult solve_forest_ef1_so(const Graph& g, int n, const SolveOptions& opts = {}) {
  FAIRDIV_REQUIRE(n >= 1, "need at least one agent");
  if (!is_forest(g)) throw InputError("forest solver: graph is not a forest");
  return detail::solve_on_core(g, n, n, "forest-ef1-so", [n, &opts](const Graph& core) {
    SolveResult r;
    r.guarantee = "EF1+SO";
    if (n <= 2) {
      r.algorithm = n == 1 ? "single-agent" : "forest-bipartition";
      r.allocation = n == 1 ? Allocation::from_assignment(1, std::vector<int>(core.num_vertices(), 0))
                            : detail::forest_bipartition(core);
      return r;
    }
    r.algorithm = "forest-root-peeling";
    detail::ForestPeeler peeler(core, n, r, opts);
    peeler.run();
    r.allocation = detail::finish(peeler.workspace());
    return r;
  });
}

// ---------------------------------------------------------------------------
// Equitable cuts

struct EquitableCut {
  Allocation parts;
  std::vector<Value> values;
  Value gap = 0;
  Value max_degree = 0;
  SolveTrace trace;
};

/// Non-empty n-partition whose part cut values differ by at most the maximum degree.
inline EquitableCut equitable_cut(const Graph& g, int n) {
  FAIRDIV_REQUIRE(n >= 2 && n <= g.num_vertices(), "equitable cut needs 2 <= n <= m");
  auto r = solve_ef1_wts(g, n);
  EquitableCut out{r.allocation, bundle_values(g, r.allocation), 0, g.max_degree(), std::move(r.trace)};
  auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
  out.gap = *hi - *lo;
  FAIRDIV_INVARIANT(out.gap <= out.max_degree, "equitable cut gap exceeds the maximum degree");
  return out;
}

// ---------------------------------------------------------------------------
// Dispatch

enum class SolveGoal { EfTs2, Ef1Ts, Ef1Wts, Ef1SoForest, Equitable };

inline const char* to_string(SolveGoal g) {
  switch (g) {
    case SolveGoal::EfTs2: return "ef-ts-2";
    case SolveGoal::Ef1Ts: return "ef1-ts";
    case SolveGoal::Ef1Wts: return "ef1-wts";
    case SolveGoal::Ef1SoForest: return "ef1-so-forest";
    case SolveGoal::Equitable: return "equitable";
  }
  return "?";
}

inline SolveGoal parse_goal(const std::string& s) {
  for (auto g : {SolveGoal::EfTs2, SolveGoal::Ef1Ts, SolveGoal::Ef1Wts, SolveGoal::Ef1SoForest, SolveGoal::Equitable})
    if (s == to_string(g)) return g;
  throw InputError("unknown goal '" + s + "'");
}

/**
 * Routes to the strongest applicable procedure: two agents use the greedy
 * cut search, forests the root peeling, n >= 4 the EF1+TS search and
 * everything else the EF1+wTS search. Goals that cannot be guaranteed for
 * the instance class raise InfeasibleGoal.
 */
inline SolveResult dispatch_solve(const Graph& g, int n, SolveGoal goal, const SolveOptions& opts = {}) {
  FAIRDIV_REQUIRE(n >= 1, "need at least one agent");
  const bool forest = is_forest(g);
  switch (goal) {
    case SolveGoal::EfTs2:
      if (n != 2) throw InfeasibleGoal("ef-ts-2 is defined for exactly two agents");
      return greedy_two_agents(g);
    case SolveGoal::Ef1SoForest:
      if (!forest) throw InfeasibleGoal("ef1-so-forest needs a forest; EF1 and SO can be incompatible on general graphs");
      return solve_forest_ef1_so(g, n, opts);
    case SolveGoal::Equitable: {
      auto cut = equitable_cut(g, n);
      return SolveResult{cut.parts, std::move(cut.trace), "ef1-wts-local-search",
                         "EF1+wTS, cut gap " + std::to_string(cut.gap) + " <= max degree " +
                             std::to_string(cut.max_degree)};
    }
    case SolveGoal::Ef1Ts:
      if (n == 3 && !forest)
        throw InfeasibleGoal(
            "EF1 and TS may not exist together for three agents on general graphs (non-existence witness: fig3); "
            "use the oracle");
      break;
    case SolveGoal::Ef1Wts:
      break;
  }
  if (n == 2) return greedy_two_agents(g);
  if (forest && n >= 2) return solve_forest_ef1_so(g, n, opts);
  if (n >= 4) return solve_ef1_ts_n4(g, n);
  return solve_ef1_wts(g, n);
}

}  // namespace fairdiv
