#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/error.hpp"
#include "fairdiv/graph.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

/**
 * Ordered partition of (a subset of) the vertices into n bundles.
 * Bundles are kept sorted; vertices not in any bundle are unassigned.
 */
class Allocation {
 public:
  Allocation() = default;

  Allocation(Vertex num_vertices, std::vector<std::vector<Vertex>> bundles)
      : num_vertices_(num_vertices), bundles_(std::move(bundles)) {
    FAIRDIV_REQUIRE(!bundles_.empty(), "allocation needs at least one bundle");
    std::vector<bool> used(num_vertices_, false);
    for (auto& b : bundles_) {
      std::sort(b.begin(), b.end());
      for (Vertex o : b) {
        FAIRDIV_REQUIRE(o >= 0 && o < num_vertices_, "vertex " + std::to_string(o) + " out of range");
        FAIRDIV_REQUIRE(!used[o], "vertex " + std::to_string(o) + " in two bundles");
        used[o] = true;
      }
    }
  }

  static Allocation from_assignment(int num_agents, const std::vector<int>& assignment) {
    std::vector<std::vector<Vertex>> bundles(num_agents);
    for (Vertex o = 0; o < static_cast<Vertex>(assignment.size()); ++o) {
      int b = assignment[o];
      if (b == kUnassigned) continue;
      FAIRDIV_REQUIRE(b >= 0 && b < num_agents, "bundle index out of range");
      bundles[b].push_back(o);
    }
    return Allocation(static_cast<Vertex>(assignment.size()), std::move(bundles));
  }

  static Allocation from_stats(const BundleStats& s) { return from_assignment(s.num_bundles(), s.assignment()); }

  int num_agents() const { return static_cast<int>(bundles_.size()); }
  Vertex num_vertices() const { return num_vertices_; }
  const std::vector<std::vector<Vertex>>& bundles() const { return bundles_; }
  const std::vector<Vertex>& bundle(int i) const { return bundles_.at(i); }

  std::vector<int> assignment() const {
    std::vector<int> out(num_vertices_, kUnassigned);
    for (int i = 0; i < num_agents(); ++i)
      for (Vertex o : bundles_[i]) out[o] = i;
    return out;
  }

  Vertex num_assigned() const {
    std::size_t k = 0;
    for (const auto& b : bundles_) k += b.size();
    return static_cast<Vertex>(k);
  }
  bool complete() const { return num_assigned() == num_vertices_; }
  bool all_nonempty() const {
    return std::none_of(bundles_.begin(), bundles_.end(), [](const auto& b) { return b.empty(); });
  }

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  Vertex num_vertices_ = 0;
  std::vector<std::vector<Vertex>> bundles_;
};

inline BundleStats make_stats(const Graph& g, const Allocation& a) {
  FAIRDIV_REQUIRE(a.num_vertices() == g.num_vertices(), "allocation does not match the graph");
  return BundleStats(g, a.num_agents(), a.assignment());
}

inline std::vector<Value> bundle_values(const Graph& g, const Allocation& a) { return make_stats(g, a).values(); }

/// Sum of bundle values; each edge contributes 0, 1 or 2.
inline Value social_welfare(const Graph& g, const Allocation& a) { return make_stats(g, a).social_welfare(); }

// ---------------------------------------------------------------------------
// Potential

/// (minimum bundle value, -number of bundles attaining it), ordered lexicographically.
struct Potential {
  Value min_value = 0;
  int neg_min_count = 0;

  auto operator<=>(const Potential&) const = default;
};

inline std::string to_string(const Potential& p) {
  return "(" + std::to_string(p.min_value) + "," + std::to_string(p.neg_min_count) + ")";
}

/// Potential of a value vector; the minimum is taken regardless of order.
inline Potential potential_of(const std::vector<Value>& values) {
  FAIRDIV_REQUIRE(!values.empty(), "potential of an empty allocation");
  Value lo = *std::min_element(values.begin(), values.end());
  int count = static_cast<int>(std::count(values.begin(), values.end(), lo));
  return {lo, -count};
}

/// Potential of bundles already in non-decreasing value order.
inline Potential potential(const std::vector<Value>& sorted_values) {
  FAIRDIV_REQUIRE(std::is_sorted(sorted_values.begin(), sorted_values.end()),
                  "potential requires bundles sorted by value");
  return potential_of(sorted_values);
}

inline Potential potential(const Graph& g, const Allocation& a) { return potential(bundle_values(g, a)); }

// ---------------------------------------------------------------------------
// Relabelling and o*

/// Stable order of bundle indices by non-decreasing value.
inline std::vector<int> sorted_order(const std::vector<Value>& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
  return order;
}

inline Allocation sort_bundles(const Allocation& a, const BundleStats& stats) {
  std::vector<std::vector<Vertex>> out;
  for (int i : sorted_order(stats.values())) out.push_back(a.bundle(i));
  return Allocation(a.num_vertices(), std::move(out));
}

inline Allocation sort_bundles(const Graph& g, const Allocation& a) { return sort_bundles(a, make_stats(g, a)); }

struct DropItem {
  Vertex item;
  Value remaining;  // v(A_i \ {item})

  friend bool operator==(const DropItem&, const DropItem&) = default;
};

/// Item of bundle i whose removal leaves the least value; least vertex on ties.
inline std::optional<DropItem> min_drop_item(const BundleStats& s, int i) {
  std::optional<DropItem> best;
  for (Vertex o = 0; o < s.num_vertices(); ++o) {
    if (s.assignment()[o] != i) continue;
    Value rest = s.value(i) + s.marginal_remove(i, o);
    if (!best || rest < best->remaining) best = DropItem{o, rest};
  }
  return best;
}

inline std::optional<DropItem> min_drop_item(const Graph& g, const Allocation& a, int i) {
  return min_drop_item(make_stats(g, a), i);
}

/// min_drop_item for every bundle in one pass.
inline std::vector<std::optional<DropItem>> min_drop_items(const BundleStats& s) {
  std::vector<std::optional<DropItem>> best(s.num_bundles());
  for (Vertex o = 0; o < s.num_vertices(); ++o) {
    int i = s.assignment()[o];
    if (i == kUnassigned) continue;
    Value rest = s.value(i) - s.raw_marginal(o, i);
    if (!best[i] || rest < best[i]->remaining) best[i] = DropItem{o, rest};
  }
  return best;
}

/// v(A_i \ {o_i*}) with the convention 0 for an empty bundle.
inline Value drop_value(const std::optional<DropItem>& d) { return d ? d->remaining : 0; }

// ---------------------------------------------------------------------------
// Reports

struct Violation {
  int i = 0;
  int j = 0;
  std::optional<Vertex> item;
  std::vector<Value> values;

  friend bool operator==(const Violation&, const Violation&) = default;
};

enum class Verdict { Yes, No, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

struct FairnessReport {
  std::string predicate;
  bool holds = true;
  Verdict verdict = Verdict::Yes;
  std::vector<Violation> violations;
  std::string note;

  void add(Violation v) {
    violations.push_back(std::move(v));
    holds = false;
    verdict = Verdict::No;
  }
};

inline FairnessReport make_report(std::string predicate) {
  FairnessReport r;
  r.predicate = std::move(predicate);
  return r;
}

/// Exact rational in (0, 1].
struct Ratio {
  Value num = 1;
  Value den = 1;
};

inline Ratio checked_alpha(Ratio alpha) {
  FAIRDIV_REQUIRE(alpha.den > 0 && alpha.num > 0 && alpha.num <= alpha.den, "alpha must lie in (0,1]");
  return alpha;
}

// ---------------------------------------------------------------------------
// Checkers over BundleStats

inline FairnessReport check_ef(const BundleStats& s) {
  FairnessReport r = make_report("EF");
  for (int i = 0; i < s.num_bundles(); ++i)
    for (int j = 0; j < s.num_bundles(); ++j)
      if (s.value(j) > s.value(i)) r.add({i, j, std::nullopt, {s.value(i), s.value(j)}});
  return r;
}

/// alpha-EF1 over all ordered pairs: q*v(A_i) >= p*min_o v(A_j \ {o}).
inline FairnessReport check_alpha_ef1(const BundleStats& s, Ratio alpha) {
  checked_alpha(alpha);
  const bool exact = alpha.num == alpha.den;
  FairnessReport r = make_report(exact ? "EF1" : "alpha-EF1(" + std::to_string(alpha.num) + "/" + std::to_string(alpha.den) + ")");
  const auto drops = min_drop_items(s);
  for (int i = 0; i < s.num_bundles(); ++i) {
    for (int j = 0; j < s.num_bundles(); ++j) {
      if (s.value(j) <= s.value(i)) continue;
      const auto& d = drops[j];
      FAIRDIV_INVARIANT(d.has_value(), "envied bundle is empty");
      if (alpha.den * s.value(i) < alpha.num * d->remaining)
        r.add({i, j, d->item, {s.value(i), s.value(j), d->remaining}});
    }
  }
  return r;
}

/// Pairwise EF1.
inline FairnessReport check_ef1(const BundleStats& s) { return check_alpha_ef1(s, Ratio{1, 1}); }

/// EF1 through the least-valued bundle only: with identical valuations this
/// agrees with the pairwise check.
inline FairnessReport check_ef1_least_agent(const BundleStats& s) {
  FairnessReport r = make_report("EF1");
  const auto order = sorted_order(s.values());
  const int first = order.front();
  const Value lo = s.value(first);
  const auto drops = min_drop_items(s);
  for (int j : order) {
    if (s.value(j) <= lo) continue;
    if (drops[j]->remaining > lo) r.add({first, j, drops[j]->item, {lo, s.value(j), drops[j]->remaining}});
  }
  return r;
}

namespace detail {

inline void require_complete(const BundleStats& s, const char* what) {
  if (!s.complete()) throw InputError(std::string(what) + " is defined for complete allocations only");
}

/// Shared TS / wTS scan. Donor change r = v(A_i - o) - v(A_i), receiver change a = v(A_j + o) - v(A_j).
template <typename Blocking>
FairnessReport transfer_scan(const BundleStats& s, const char* name, Blocking blocking) {
  require_complete(s, name);
  FairnessReport r = make_report(name);
  for (Vertex o = 0; o < s.num_vertices(); ++o) {
    const int i = s.assignment()[o];
    const Value donor = -s.raw_marginal(o, i);
    for (int j = 0; j < s.num_bundles(); ++j) {
      if (j == i) continue;
      const Value receiver = s.raw_marginal(o, j);
      if (blocking(donor, receiver)) r.add({i, j, o, {donor, receiver}});
    }
  }
  return r;
}

}  // namespace detail

inline FairnessReport check_ts(const BundleStats& s) {
  return detail::transfer_scan(s, "TS", [](Value d, Value a) { return d >= 0 && a >= 0 && (d > 0 || a > 0); });
}

inline FairnessReport check_wts(const BundleStats& s) {
  return detail::transfer_scan(s, "wTS", [](Value d, Value a) { return d > 0 && a > 0; });
}

/// Edges whose endpoints share a bundle.
inline std::vector<Edge> monochromatic_edges(const BundleStats& s) {
  std::vector<Edge> out;
  for (auto [u, v] : s.graph().edges()) {
    int bu = s.assignment()[u];
    if (bu != kUnassigned && bu == s.assignment()[v]) out.push_back({u, v});
  }
  return out;
}

/// Optional exact fallback for check_so: returns the optimal welfare over all
/// n-partitions, or nullopt when the instance is too large to decide.
using MaxWelfareFn = std::function<std::optional<Value>(const Graph&, int)>;

/**
 * Social optimality in three tiers: welfare 2|E| is always optimal; on a
 * forest with n >= 2 optimality means no monochromatic edge; otherwise the
 * optional exact fallback decides, and without it the verdict is unknown.
 */
inline FairnessReport check_so(const BundleStats& s, const MaxWelfareFn& max_welfare = {}) {
  detail::require_complete(s, "SO");
  FairnessReport r = make_report("SO");
  const Graph& g = s.graph();
  const Value sw = s.social_welfare();
  if (sw == 2 * g.num_edges() || s.num_bundles() == 1) {
    r.note = s.num_bundles() == 1 ? "single agent" : "welfare equals 2|E|";
    return r;
  }
  if (is_forest(g)) {
    r.note = "forest: optimal iff no monochromatic edge";
    for (auto [u, v] : monochromatic_edges(s)) r.add({s.assignment()[u], s.assignment()[u], u, {sw, 2 * g.num_edges()}});
    return r;
  }
  if (max_welfare) {
    if (auto best = max_welfare(g, s.num_bundles())) {
      r.note = "exhaustive optimum " + std::to_string(*best);
      if (sw < *best) r.add({0, 0, std::nullopt, {sw, *best}});
      return r;
    }
  }
  r.holds = false;
  r.verdict = Verdict::Unknown;
  r.note = "undecided: not a forest, welfare below 2|E|, exhaustive check unavailable";
  return r;
}

// ---------------------------------------------------------------------------
// Allocation overloads

inline FairnessReport check_ef(const Graph& g, const Allocation& a) { return check_ef(make_stats(g, a)); }
inline FairnessReport check_ef1(const Graph& g, const Allocation& a) { return check_ef1(make_stats(g, a)); }
inline FairnessReport check_ef1_least_agent(const Graph& g, const Allocation& a) {
  return check_ef1_least_agent(make_stats(g, a));
}
inline FairnessReport check_alpha_ef1(const Graph& g, const Allocation& a, Ratio alpha) {
  return check_alpha_ef1(make_stats(g, a), alpha);
}
inline FairnessReport check_ts(const Graph& g, const Allocation& a) { return check_ts(make_stats(g, a)); }
inline FairnessReport check_wts(const Graph& g, const Allocation& a) { return check_wts(make_stats(g, a)); }
inline FairnessReport check_so(const Graph& g, const Allocation& a, const MaxWelfareFn& fallback = {}) {
  return check_so(make_stats(g, a), fallback);
}

}  // namespace fairdiv
