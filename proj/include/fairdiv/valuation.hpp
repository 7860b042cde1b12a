#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/error.hpp"
#include "fairdiv/graph.hpp"

namespace fairdiv {

/// Cut value of a vertex set: edges with exactly one endpoint inside.
template <typename Range>
Value cut_value(const Graph& g, const Range& set) {
  std::vector<bool> inside(g.num_vertices(), false);
  for (Vertex o : set) {
    g.check_vertex(o);
    inside[o] = true;
  }
  Value cut = 0;
  for (auto [u, v] : g.edges())
    if (inside[u] != inside[v]) ++cut;
  return cut;
}

inline Value cut_value(const Graph& g, std::initializer_list<Vertex> set) {
  return cut_value(g, std::vector<Vertex>(set));
}

enum class ItemClass { StrictGood, WeakChore, StrictChore };

inline const char* to_string(ItemClass c) {
  switch (c) {
    case ItemClass::StrictGood: return "strict-good";
    case ItemClass::WeakChore: return "weak-chore";
    case ItemClass::StrictChore: return "strict-chore";
  }
  return "?";
}

inline constexpr int kUnassigned = -1;

/**
 * Incremental bookkeeping for an allocation under the cut valuation.
 *
 * For every (vertex, bundle) pair it keeps the number of neighbours of the
 * vertex inside the bundle, so that marginal values are O(1) and a move
 * costs O(deg). Unassigned vertices belong to no bundle but count as
 * outside for every bundle.
 */
class BundleStats {
 public:
  BundleStats() = default;

  BundleStats(const Graph& g, int num_bundles)
      : graph_(&g),
        num_bundles_(num_bundles),
        assignment_(g.num_vertices(), kUnassigned),
        counts_(static_cast<std::size_t>(g.num_vertices()) * static_cast<std::size_t>(num_bundles), 0),
        value_(num_bundles, 0),
        size_(num_bundles, 0) {
    FAIRDIV_REQUIRE(num_bundles >= 1, "need at least one bundle");
  }

  /// Stats for a full assignment vector (kUnassigned allowed).
  BundleStats(const Graph& g, int num_bundles, const std::vector<int>& assignment) : BundleStats(g, num_bundles) {
    FAIRDIV_REQUIRE(assignment.size() == static_cast<std::size_t>(g.num_vertices()), "assignment size mismatch");
    for (Vertex o = 0; o < g.num_vertices(); ++o)
      if (assignment[o] != kUnassigned) apply_move(o, std::nullopt, assignment[o]);
  }

  const Graph& graph() const { return *graph_; }
  int num_bundles() const { return num_bundles_; }
  Vertex num_vertices() const { return graph_->num_vertices(); }

  std::optional<int> bundle_of(Vertex o) const {
    int b = assignment_[check_vertex(o)];
    return b == kUnassigned ? std::nullopt : std::optional<int>(b);
  }
  const std::vector<int>& assignment() const { return assignment_; }

  /// |N_{A_i}(o)|
  int neighbors_in_bundle(Vertex o, int i) const {
    return counts_[index(check_vertex(o), check_bundle(i))];
  }

  Value value(int i) const { return value_[check_bundle(i)]; }
  const std::vector<Value>& values() const { return value_; }
  int size(int i) const { return size_[check_bundle(i)]; }

  bool complete() const {
    for (int b : assignment_)
      if (b == kUnassigned) return false;
    return true;
  }

  Value social_welfare() const {
    Value sw = 0;
    for (Value v : value_) sw += v;
    return sw;
  }

  /// deg(o) - 2|N_{A_i}(o)|, the marginal of o against A_i (or A_i \ {o}).
  Value raw_marginal(Vertex o, int i) const {
    return graph_->degree(o) - 2 * static_cast<Value>(neighbors_in_bundle(o, i));
  }

  /// v(A_i + o) - v(A_i). o must not already be in A_i.
  Value marginal_add(int i, Vertex o) const {
    check_bundle(i);
    if (assignment_[check_vertex(o)] == i)
      throw InputError("vertex " + std::to_string(o) + " already in bundle " + std::to_string(i));
    return raw_marginal(o, i);
  }

  /// v(A_i - o) - v(A_i). o must be in A_i.
  Value marginal_remove(int i, Vertex o) const {
    check_bundle(i);
    if (assignment_[check_vertex(o)] != i)
      throw InputError("vertex " + std::to_string(o) + " not in bundle " + std::to_string(i));
    return -raw_marginal(o, i);
  }

  /// Classification against A_i, or against A_i \ {o} when o is in A_i.
  ItemClass classify_item(int i, Vertex o) const {
    Value mv = raw_marginal(o, i);
    if (mv > 0) return ItemClass::StrictGood;
    if (mv == 0) return ItemClass::WeakChore;
    return ItemClass::StrictChore;
  }

  /// Moves o from `from` to `to`; either side may be absent (unassigned).
  void apply_move(Vertex o, std::optional<int> from, std::optional<int> to) {
    check_vertex(o);
    const int cur = assignment_[o];
    const int want_from = from.value_or(kUnassigned);
    if (cur != want_from)
      throw InputError("vertex " + std::to_string(o) + " is not in the stated source bundle");
    if (to) check_bundle(*to);
    if (from) check_bundle(*from);
    if (from && to && *from == *to) throw InputError("source and target bundle coincide");

    if (from) {
      value_[*from] -= raw_marginal(o, *from);
      --size_[*from];
      for (Vertex w : graph_->neighbors(o)) --counts_[index(w, *from)];
    }
    if (to) {
      value_[*to] += raw_marginal(o, *to);
      ++size_[*to];
      for (Vertex w : graph_->neighbors(o)) ++counts_[index(w, *to)];
    }
    assignment_[o] = to.value_or(kUnassigned);
  }

  /// Moves o to `to` from wherever it currently is.
  void move(Vertex o, std::optional<int> to) { apply_move(o, bundle_of(o), to); }

  std::vector<Vertex> members(int i) const {
    check_bundle(i);
    std::vector<Vertex> out;
    for (Vertex o = 0; o < num_vertices(); ++o)
      if (assignment_[o] == i) out.push_back(o);
    return out;
  }

  /// Recomputes every cache from scratch and compares. Test hook.
  bool consistent() const {
    BundleStats fresh(*graph_, num_bundles_, assignment_);
    return fresh.counts_ == counts_ && fresh.value_ == value_ && fresh.size_ == size_;
  }

  friend bool operator==(const BundleStats& a, const BundleStats& b) {
    return a.graph_ == b.graph_ && a.num_bundles_ == b.num_bundles_ && a.assignment_ == b.assignment_ &&
           a.counts_ == b.counts_ && a.value_ == b.value_ && a.size_ == b.size_;
  }

 private:
  std::size_t index(Vertex o, int i) const {
    return static_cast<std::size_t>(o) * static_cast<std::size_t>(num_bundles_) + static_cast<std::size_t>(i);
  }
  Vertex check_vertex(Vertex o) const {
    graph_->check_vertex(o);
    return o;
  }
  int check_bundle(int i) const {
    FAIRDIV_REQUIRE(i >= 0 && i < num_bundles_, "bundle " + std::to_string(i) + " out of range");
    return i;
  }

  const Graph* graph_ = nullptr;
  int num_bundles_ = 0;
  std::vector<int> assignment_;
  std::vector<std::int32_t> counts_;
  std::vector<Value> value_;
  std::vector<int> size_;
};

}  // namespace fairdiv
