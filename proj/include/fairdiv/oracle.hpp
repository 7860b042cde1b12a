#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "fairdiv/allocation.hpp"
#include "fairdiv/error.hpp"
#include "fairdiv/graph.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

enum class Pred { EF, EF1, AlphaEF1, TS, WTS, PO, SO, NonEmpty };

inline const char* to_string(Pred p) {
  switch (p) {
    case Pred::EF: return "ef";
    case Pred::EF1: return "ef1";
    case Pred::AlphaEF1: return "alpha-ef1";
    case Pred::TS: return "ts";
    case Pred::WTS: return "wts";
    case Pred::PO: return "po";
    case Pred::SO: return "so";
    case Pred::NonEmpty: return "nonempty";
  }
  return "?";
}

inline Pred parse_pred(const std::string& s) {
  for (auto p : {Pred::EF, Pred::EF1, Pred::AlphaEF1, Pred::TS, Pred::WTS, Pred::PO, Pred::SO, Pred::NonEmpty})
    if (s == to_string(p)) return p;
  throw InputError("unknown predicate '" + s + "'");
}

enum class OracleMode { Exists, FindAll, Count };

inline const char* to_string(OracleMode m) {
  switch (m) {
    case OracleMode::Exists: return "exists";
    case OracleMode::FindAll: return "find-all";
    case OracleMode::Count: return "count";
  }
  return "?";
}

inline constexpr std::uint64_t kDefaultMaxStates = 20'000'000;

/// State cap: FAIRDIV_MAX_STATES if set and valid, else the default.
inline std::uint64_t default_max_states() {
  if (const char* env = std::getenv("FAIRDIV_MAX_STATES")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultMaxStates;
}

struct OracleQuery {
  std::vector<Pred> predicates;
  Ratio alpha{1, 2};
  OracleMode mode = OracleMode::Exists;
  std::uint64_t max_states = default_max_states();
  Vertex max_m = 64;
  int max_n = 64;
  bool symmetry = false;  // fix vertex 0 in bundle 0; exists mode only
  int threads = 1;
};

struct OracleResult {
  Verdict verdict = Verdict::No;
  std::optional<Allocation> witness;
  std::vector<Allocation> all;
  std::uint64_t count = 0;
  std::uint64_t states_scanned = 0;
  double elapsed_ms = 0;
};

namespace detail {

/// base^exp, or nullopt when it exceeds `limit`.
inline std::optional<std::uint64_t> bounded_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t limit) {
  std::uint64_t r = 1;
  for (std::uint64_t k = 0; k < exp; ++k) {
    if (base != 0 && r > limit / base) return std::nullopt;
    r *= base;
  }
  return r <= limit ? std::optional<std::uint64_t>(r) : std::nullopt;
}

inline std::uint64_t require_states(int n, std::size_t free, std::uint64_t cap) {
  auto s = bounded_pow(static_cast<std::uint64_t>(n), free, cap);
  if (!s)
    throw CapExceeded(std::to_string(n) + "^" + std::to_string(free) + " states exceed the cap of " +
                      std::to_string(cap));
  return *s;
}

/**
 * Walks assignments of `free` vertices (first one most significant) over
 * [lo, hi) in lexicographic order, keeping one BundleStats up to date by
 * odometer moves. `visit(stats, index)` returns true to stop.
 */
template <typename Visit>
void scan_range(const Graph& g, int n, const std::vector<int>& base, const std::vector<Vertex>& free, std::uint64_t lo,
                std::uint64_t hi, Visit&& visit) {
  if (lo >= hi) return;
  const std::size_t k = free.size();
  std::vector<int> digit(k, 0);
  std::uint64_t rest = lo;
  for (std::size_t p = k; p-- > 0;) {
    digit[p] = static_cast<int>(rest % static_cast<std::uint64_t>(n));
    rest /= static_cast<std::uint64_t>(n);
  }
  std::vector<int> assignment = base;
  for (std::size_t p = 0; p < k; ++p) assignment[free[p]] = digit[p];
  BundleStats s(g, n, assignment);
  for (std::uint64_t idx = lo;;) {
    if (visit(static_cast<const BundleStats&>(s), idx)) return;
    if (++idx >= hi) return;
    for (std::size_t p = k; p-- > 0;) {
      if (++digit[p] < n) {
        s.move(free[p], digit[p]);
        break;
      }
      digit[p] = 0;
      s.move(free[p], 0);
    }
  }
}

/// Splits [0, total) into `threads` contiguous chunks and runs `work(lo, hi, chunk)`.
template <typename Work>
void run_chunks(std::uint64_t total, int threads, Work&& work) {
  const auto t = static_cast<std::uint64_t>(std::max(1, threads));
  if (t == 1 || total < 2 * t) {
    work(0, total, 0);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t step = (total + t - 1) / t;
  for (std::uint64_t c = 0; c < t; ++c) {
    std::uint64_t lo = c * step, hi = std::min(total, lo + step);
    pool.emplace_back([&work, lo, hi, c] { work(lo, hi, static_cast<std::size_t>(c)); });
  }
  for (auto& th : pool) th.join();
}

inline std::vector<Value> sorted_values(const BundleStats& s) {
  std::vector<Value> v = s.values();
  std::sort(v.begin(), v.end());
  return v;
}

inline bool weakly_dominates(const std::vector<Value>& a, const std::vector<Value>& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

/// Fast allocation-level predicates over live stats.
class PredicateEval {
 public:
  PredicateEval(const OracleQuery& q, std::optional<Value> max_sw, std::set<std::vector<Value>> pareto)
      : preds_(q.predicates), alpha_(q.alpha), max_sw_(max_sw), pareto_(std::move(pareto)) {
    // Cheap predicates first.
    std::stable_sort(preds_.begin(), preds_.end(), [](Pred a, Pred b) { return cost(a) < cost(b); });
  }

  bool operator()(const BundleStats& s) const {
    for (Pred p : preds_)
      if (!holds(p, s)) return false;
    return true;
  }

 private:
  static int cost(Pred p) {
    switch (p) {
      case Pred::EF: case Pred::SO: case Pred::NonEmpty: return 0;
      case Pred::EF1: case Pred::AlphaEF1: return 1;
      case Pred::PO: return 2;
      case Pred::TS: case Pred::WTS: return 3;
    }
    return 4;
  }

  bool holds(Pred p, const BundleStats& s) const {
    const int n = s.num_bundles();
    switch (p) {
      case Pred::EF: {
        for (int i = 1; i < n; ++i)
          if (s.value(i) != s.value(0)) return false;
        return true;
      }
      case Pred::NonEmpty:
        for (int i = 0; i < n; ++i)
          if (s.size(i) == 0) return false;
        return true;
      case Pred::SO: return max_sw_ && s.social_welfare() == *max_sw_;
      case Pred::EF1: return alpha_ef1(s, 1, 1);
      case Pred::AlphaEF1: return alpha_ef1(s, alpha_.num, alpha_.den);
      case Pred::PO: return pareto_.count(sorted_values(s)) != 0;
      case Pred::TS: return transfer_stable(s, false);
      case Pred::WTS: return transfer_stable(s, true);
    }
    return false;
  }

  static bool alpha_ef1(const BundleStats& s, std::int64_t num, std::int64_t den) {
    const int n = s.num_bundles();
    Value lo = s.value(0);
    for (int i = 1; i < n; ++i) lo = std::min(lo, s.value(i));
    std::vector<Value> best_raw(n, std::numeric_limits<Value>::min());
    for (Vertex o = 0; o < s.num_vertices(); ++o) {
      int b = s.assignment()[o];
      if (b != kUnassigned) best_raw[b] = std::max(best_raw[b], s.raw_marginal(o, b));
    }
    for (int j = 0; j < n; ++j) {
      if (s.value(j) <= lo || s.size(j) == 0) continue;
      Value drop = s.value(j) - best_raw[j];
      if (den * lo < num * drop) return false;
    }
    return true;
  }

  static bool transfer_stable(const BundleStats& s, bool weak) {
    const int n = s.num_bundles();
    for (Vertex o = 0; o < s.num_vertices(); ++o) {
      int i = s.assignment()[o];
      if (i == kUnassigned) continue;
      const Value d = -s.raw_marginal(o, i);
      if (weak ? d <= 0 : d < 0) continue;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const Value a = s.raw_marginal(o, j);
        if (weak ? a > 0 : (a >= 0 && (d > 0 || a > 0))) return false;
      }
    }
    return true;
  }

  std::vector<Pred> preds_;
  Ratio alpha_;
  std::optional<Value> max_sw_;
  std::set<std::vector<Value>> pareto_;
};

inline std::vector<Vertex> all_vertices(const Graph& g) {
  std::vector<Vertex> v(g.num_vertices());
  for (Vertex o = 0; o < g.num_vertices(); ++o) v[o] = o;
  return v;
}

inline void check_caps(const Graph& g, int n, const OracleQuery& q) {
  FAIRDIV_REQUIRE(n >= 1, "need at least one agent");
  if (g.num_vertices() > q.max_m)
    throw CapExceeded("m=" + std::to_string(g.num_vertices()) + " exceeds max_m=" + std::to_string(q.max_m));
  if (n > q.max_n) throw CapExceeded("n=" + std::to_string(n) + " exceeds max_n=" + std::to_string(q.max_n));
}

/// Distinct sorted value vectors that no other vector dominates.
inline std::set<std::vector<Value>> pareto_frontier(const Graph& g, int n, std::uint64_t cap) {
  const auto free = all_vertices(g);
  const std::uint64_t total = require_states(n, free.size() > 0 ? free.size() - 1 : 0, cap);
  std::set<std::vector<Value>> seen;
  scan_range(g, n, std::vector<int>(g.num_vertices(), kUnassigned), free, 0, g.num_vertices() ? total : 1,
             [&](const BundleStats& s, std::uint64_t) {
               seen.insert(sorted_values(s));
               return false;
             });
  std::set<std::vector<Value>> frontier;
  for (const auto& v : seen) {
    bool dominated = false;
    for (const auto& w : seen)
      if (weakly_dominates(w, v)) {
        dominated = true;
        break;
      }
    if (!dominated) frontier.insert(v);
  }
  return frontier;
}

}  // namespace detail

/// Number of complete assignments V -> [n] (throws when above the cap).
inline std::uint64_t count_states(const Graph& g, int n, std::uint64_t cap = default_max_states()) {
  return detail::require_states(n, static_cast<std::size_t>(g.num_vertices()), cap);
}

/// Every complete assignment, in lexicographic order (last vertex fastest).
template <typename Visit>
void enumerate_allocations(const Graph& g, int n, Visit&& visit, std::uint64_t cap = default_max_states()) {
  FAIRDIV_REQUIRE(n >= 1, "need at least one agent");
  const auto total = count_states(g, n, cap);
  detail::scan_range(g, n, std::vector<int>(g.num_vertices(), kUnassigned), detail::all_vertices(g), 0, total,
                     [&](const BundleStats& s, std::uint64_t) {
                       visit(Allocation::from_stats(s));
                       return false;
                     });
}

inline std::vector<Allocation> enumerate_allocations(const Graph& g, int n, std::uint64_t cap = default_max_states()) {
  std::vector<Allocation> out;
  enumerate_allocations(g, n, [&](Allocation a) { out.push_back(std::move(a)); }, cap);
  return out;
}

/// Largest social welfare over all n-partitions; nullopt beyond the cap.
inline std::optional<Value> oracle_max_welfare(const Graph& g, int n, std::uint64_t cap = default_max_states()) {
  if (n == 1 || g.num_vertices() == 0) return 0;
  const auto free = detail::all_vertices(g);
  auto total = detail::bounded_pow(static_cast<std::uint64_t>(n), free.size() - 1, cap);
  if (!total) return std::nullopt;
  Value best = 0;
  const Value ceiling = 2 * g.num_edges();
  detail::scan_range(g, n, std::vector<int>(g.num_vertices(), kUnassigned), free, 0, *total,
                     [&](const BundleStats& s, std::uint64_t) {
                       best = std::max(best, s.social_welfare());
                       return best == ceiling;
                     });
  return best;
}

inline MaxWelfareFn oracle_welfare_fallback(std::uint64_t cap = default_max_states()) {
  return [cap](const Graph& g, int n) { return oracle_max_welfare(g, n, cap); };
}

/**
 * Exhaustive search for allocations satisfying every predicate of `q`.
 * Exists mode reports the first witness in enumeration order; with
 * several threads the lowest-index witness wins, so output is identical.
 */
inline OracleResult oracle_query(const Graph& g, int n, const OracleQuery& q) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_caps(g, n, q);
  const auto free = detail::all_vertices(g);
  const bool sym = q.symmetry && q.mode == OracleMode::Exists && !free.empty();
  const std::uint64_t total = detail::require_states(n, sym ? free.size() - 1 : free.size(), q.max_states);

  auto has = [&](Pred p) { return std::find(q.predicates.begin(), q.predicates.end(), p) != q.predicates.end(); };
  std::optional<Value> max_sw;
  std::set<std::vector<Value>> pareto;
  if (has(Pred::SO)) max_sw = oracle_max_welfare(g, n, q.max_states);
  if (has(Pred::PO)) pareto = detail::pareto_frontier(g, n, q.max_states);
  if (has(Pred::AlphaEF1)) checked_alpha(q.alpha);
  const detail::PredicateEval eval(q, max_sw, std::move(pareto));

  const int threads = std::max(1, q.threads);
  struct Chunk {
    std::optional<std::uint64_t> first;
    std::optional<Allocation> witness;
    std::vector<Allocation> all;
    std::uint64_t count = 0;
  };
  std::vector<Chunk> chunks(static_cast<std::size_t>(threads));
  const std::vector<int> base(g.num_vertices(), kUnassigned);

  detail::run_chunks(total, threads, [&](std::uint64_t lo, std::uint64_t hi, std::size_t c) {
    Chunk& out = chunks[c];
    detail::scan_range(g, n, base, free, lo, hi, [&](const BundleStats& s, std::uint64_t idx) {
      if (!eval(s)) return false;
      ++out.count;
      if (q.mode == OracleMode::FindAll) out.all.push_back(Allocation::from_stats(s));
      if (q.mode == OracleMode::Exists) {
        out.first = idx;
        out.witness = Allocation::from_stats(s);
        return true;
      }
      return false;
    });
  });

  OracleResult r;
  r.states_scanned = total;
  for (auto& c : chunks) {
    if (q.mode == OracleMode::Exists && c.first && !r.witness) {
      r.witness = std::move(c.witness);
      r.states_scanned = *c.first + 1;
    }
    r.count += c.count;
    for (auto& a : c.all) r.all.push_back(std::move(a));
  }
  if (q.mode == OracleMode::Exists) r.count = r.witness ? 1 : 0;
  r.verdict = r.count > 0 ? Verdict::Yes : Verdict::No;
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::optional<Allocation> oracle_exists(const Graph& g, int n, OracleQuery q) {
  q.mode = OracleMode::Exists;
  return oracle_query(g, n, q).witness;
}

/// True iff no n-partition dominates `a` after sorting both value vectors.
inline bool oracle_pareto(const Allocation& a, const Graph& g, int n, std::uint64_t cap = default_max_states()) {
  FAIRDIV_REQUIRE(a.num_agents() == n, "allocation has " + std::to_string(a.num_agents()) + " bundles, expected " +
                                           std::to_string(n));
  FAIRDIV_REQUIRE(a.complete(), "Pareto check needs a complete allocation");
  auto target = detail::sorted_values(make_stats(g, a));
  const auto free = detail::all_vertices(g);
  if (free.empty()) return true;
  const std::uint64_t total = detail::require_states(n, free.size() - 1, cap);
  bool dominated = false;
  detail::scan_range(g, n, std::vector<int>(g.num_vertices(), kUnassigned), free, 0, total,
                     [&](const BundleStats& s, std::uint64_t) {
                       dominated = detail::weakly_dominates(detail::sorted_values(s), target);
                       return dominated;
                     });
  return !dominated;
}

/// Allocation with the lexicographically largest sorted value vector; first in enumeration order on ties.
inline Allocation oracle_leximin(const Graph& g, int n, std::uint64_t cap = default_max_states()) {
  const auto total = count_states(g, n, cap);
  std::vector<Value> best;
  std::vector<int> best_assignment;
  detail::scan_range(g, n, std::vector<int>(g.num_vertices(), kUnassigned), detail::all_vertices(g), 0, total,
                     [&](const BundleStats& s, std::uint64_t) {
                       auto v = detail::sorted_values(s);
                       if (best_assignment.empty() || v > best) {
                         best = std::move(v);
                         best_assignment = s.assignment();
                       }
                       return false;
                     });
  return Allocation::from_assignment(n, best_assignment);
}

struct MaxCut {
  Allocation bipartition;
  Value value = 0;
};

/// Maximum cut by Gray-code scan over the 2^(m-1) bipartitions with vertex 0 on side 0.
inline MaxCut oracle_max_cut(const Graph& g, std::uint64_t cap = default_max_states()) {
  const Vertex m = g.num_vertices();
  if (m == 0) return {Allocation(0, {{}, {}}), 0};
  detail::require_states(2, static_cast<std::size_t>(m - 1), cap);
  BundleStats s(g, 2, std::vector<int>(m, 0));
  std::vector<int> best = s.assignment();
  Value best_value = 0;
  const std::uint64_t total = std::uint64_t{1} << (m - 1);
  for (std::uint64_t i = 1; i < total; ++i) {
    const Vertex flip = static_cast<Vertex>(__builtin_ctzll(i)) + 1;
    s.move(flip, 1 - s.assignment()[flip]);
    if (s.value(0) > best_value) {
      best_value = s.value(0);
      best = s.assignment();
    }
  }
  return {Allocation::from_assignment(2, best), best_value};
}

/// True iff the unassigned vertices of `partial` can be placed so the result is EF1.
inline bool oracle_completable_ef1(const Allocation& partial, const Graph& g, std::uint64_t cap = default_max_states()) {
  FAIRDIV_REQUIRE(partial.num_vertices() == g.num_vertices(), "allocation does not match the graph");
  const int n = partial.num_agents();
  FAIRDIV_REQUIRE(check_ef1(g, partial).holds, "partial allocation is not EF1");
  const auto base = partial.assignment();
  std::vector<Vertex> free;
  for (Vertex o = 0; o < g.num_vertices(); ++o)
    if (base[o] == kUnassigned) free.push_back(o);
  const std::uint64_t total = detail::require_states(n, free.size(), cap);
  OracleQuery q;
  q.predicates = {Pred::EF1};
  const detail::PredicateEval eval(q, std::nullopt, {});
  bool found = false;
  detail::scan_range(g, n, base, free, 0, total, [&](const BundleStats& s, std::uint64_t) {
    found = eval(s);
    return found;
  });
  return found;
}

}  // namespace fairdiv
