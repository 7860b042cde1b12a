#include <gtest/gtest.h>

#include "fairdiv/fairdiv.hpp"

using namespace fairdiv;

TEST(Graph, Degrees) {
  EXPECT_EQ(gen_fig1().graph.degree(0), 4);
  EXPECT_EQ(gen_fig3(3).graph.degree(0), 3);
  Graph g(3, {{0, 1}});
  EXPECT_EQ(g.degree(2), 0);
  EXPECT_THROW(g.degree(3), InputError);
}

TEST(Graph, HandshakeOnRandomGraphs) {
  SplitMix64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const auto g = gen_random_graph(2 + static_cast<int>(rng.below(20)), 0.3, rng.next()).graph;
    Value sum = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) sum += g.degree(v);
    EXPECT_EQ(sum, 2 * g.num_edges());
  }
}

TEST(Graph, RejectsLoopsAndDuplicates) {
  EXPECT_THROW(Graph(3, {{1, 1}}), InputError);
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), InputError);
  EXPECT_THROW(Graph(3, {{0, 3}}), InputError);
}

TEST(Graph, Forests) {
  EXPECT_TRUE(is_forest(gen_path(4).graph));
  EXPECT_FALSE(is_forest(gen_fig3(3).graph));
  EXPECT_TRUE(is_forest(gen_fig1().graph));
  EXPECT_TRUE(is_forest(Graph(3, {})));
}

TEST(Graph, ForestAgreesWithEdgeCount) {
  SplitMix64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const Vertex m = 2 + static_cast<Vertex>(rng.below(10));
    const double p = rng.chance(0.5) ? 0.1 : 0.35;
    std::vector<Edge> edges;
    for (Vertex u = 0; u < m; ++u)
      for (Vertex v = u + 1; v < m; ++v)
        if (rng.chance(p)) edges.push_back({u, v});
    const Graph g(m, edges);
    bool by_count = true;
    for (const auto& comp : connected_components(g)) {
      Value e = 0;
      for (Vertex v : comp) e += g.degree(v);
      by_count = by_count && e / 2 == static_cast<Value>(comp.size()) - 1;
    }
    EXPECT_EQ(is_forest(g), by_count);
  }
}

TEST(Graph, Components) {
  const auto comps = connected_components(gen_appendix_a().graph);
  ASSERT_EQ(comps.size(), 3u);
  EXPECT_EQ(comps[0].size(), 4u);
  EXPECT_EQ(comps[1].size(), 6u);
  EXPECT_EQ(comps[2].size(), 4u);
  EXPECT_EQ(connected_components(Graph(3, {})).size(), 3u);
  EXPECT_EQ(connected_components(gen_fig1().graph).size(), 1u);
}

TEST(Graph, RootForest) {
  const auto p = root_forest(gen_path(4).graph, std::vector<Vertex>{0});
  EXPECT_FALSE(p.parent[0]);
  EXPECT_EQ(p.parent[1], 0);
  EXPECT_EQ(p.parent[2], 1);
  EXPECT_EQ(p.parent[3], 2);

  const auto s = root_forest(gen_star(4).graph, std::vector<Vertex>{1});
  EXPECT_EQ(s.parent[0], 1);
  EXPECT_EQ(s.children[0], (std::vector<Vertex>{2, 3, 4}));

  const auto a = root_forest(gen_appendix_a().graph);
  EXPECT_EQ(a.tree_roots, (std::vector<Vertex>{0, 4, 10}));
  EXPECT_EQ(a.frontier, (std::set<Vertex>{0, 4, 10}));

  EXPECT_THROW(root_forest(gen_fig3(3).graph), InputError);
  EXPECT_THROW(root_forest(gen_appendix_a().graph, std::vector<Vertex>{0, 1, 4, 10}), InputError);
}

TEST(Graph, RootForestCoversEachTree) {
  SplitMix64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const auto g = gen_random_forest(6 + static_cast<int>(rng.below(20)), 1 + static_cast<int>(rng.below(3)),
                                     rng.next())
                       .graph;
    const auto f = root_forest(g);
    const auto comps = connected_components(g);
    ASSERT_EQ(f.tree_roots.size(), comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
      std::vector<Vertex> seen{f.tree_roots[c]};
      for (std::size_t k = 0; k < seen.size(); ++k)
        for (Vertex ch : f.children[seen[k]]) seen.push_back(ch);
      std::sort(seen.begin(), seen.end());
      EXPECT_EQ(seen, comps[c]);
    }
  }
}

TEST(Valuation, CutValues) {
  const auto g = gen_fig1().graph;
  EXPECT_EQ(cut_value(g, {0}), 4);
  EXPECT_EQ(cut_value(g, {0, 2}), 3);
  EXPECT_EQ(cut_value(g, {}), 0);
  EXPECT_EQ(cut_value(g, {0, 1, 2, 3, 4, 5, 6, 7}), 0);
}

TEST(Valuation, MarginalsFromExamples) {
  const auto g = gen_fig1().graph;
  BundleStats s(g, 3);
  s.move(0, 0);
  EXPECT_EQ(s.marginal_add(0, 2), -1);
  EXPECT_EQ(s.classify_item(0, 2), ItemClass::StrictChore);
  s.move(1, 1);
  EXPECT_EQ(s.classify_item(1, 2), ItemClass::StrictGood);
  EXPECT_EQ(s.marginal_add(2, 5), g.degree(5));

  s.move(2, 0);
  EXPECT_EQ(s.value(0), 3);
  EXPECT_EQ(s.marginal_remove(0, 2), 1);
  EXPECT_EQ(s.marginal_remove(1, 1), -g.degree(1));
  EXPECT_THROW(s.marginal_add(0, 2), InputError);
  EXPECT_THROW(s.marginal_remove(2, 2), InputError);

  s.move(2, 2);
  EXPECT_EQ(s.value(0), 4);
  EXPECT_EQ(s.value(2), 1);

  Graph p(3, {{0, 1}, {1, 2}});
  BundleStats t(p, 2);
  t.move(0, 0);
  EXPECT_EQ(t.classify_item(0, 1), ItemClass::WeakChore);
}

TEST(Valuation, MoveToEmptyBundle) {
  const auto g = gen_fig1().graph;
  BundleStats s(g, 2);
  s.move(0, 0);
  s.move(2, 0);
  s.move(2, 1);
  EXPECT_EQ(s.value(0), 4);
  EXPECT_EQ(s.value(1), 1);
}

TEST(Valuation, MoveThenBackIsIdentity) {
  const auto g = gen_fig3(5).graph;
  BundleStats s(g, 3, {0, 1, 2, 0, 1, 2, 0});
  const BundleStats before = s;
  s.move(3, 2);
  s.move(3, 0);
  EXPECT_EQ(s, before);
  EXPECT_THROW(s.apply_move(3, 1, 2), InputError);
}

TEST(Valuation, RandomMovesMatchScratch) {
  SplitMix64 rng(4);
  const auto g = gen_random_graph(14, 0.3, rng.next()).graph;
  const int n = 4;
  BundleStats s(g, n);
  for (int t = 0; t < 10000; ++t) {
    const Vertex o = static_cast<Vertex>(rng.below(14));
    const auto r = rng.below(n + 1);
    const std::optional<int> to = r == static_cast<std::uint64_t>(n) ? std::nullopt : std::optional<int>(static_cast<int>(r));
    if (to && s.bundle_of(o) == to) continue;
    if (to) {
      const Value expect_gain = s.marginal_add(*to, o);
      const Value before = s.value(*to);
      s.move(o, to);
      EXPECT_EQ(s.value(*to) - before, expect_gain);
    } else {
      s.move(o, std::nullopt);
    }
    for (int i = 0; i < n; ++i) {
      const auto mem = s.members(i);
      EXPECT_EQ(s.value(i), cut_value(g, std::vector<Vertex>(mem.begin(), mem.end())));
    }
  }
  EXPECT_TRUE(s.consistent());
}

TEST(Valuation, MarginalsMatchRecomputation) {
  SplitMix64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto g = gen_random_graph(8, 0.4, rng.next()).graph;
    std::vector<int> a(8);
    for (auto& b : a) b = static_cast<int>(rng.below(3));
    BundleStats s(g, 3, a);
    for (Vertex o = 0; o < 8; ++o) {
      const int home = a[o];
      auto mem = s.members(home);
      std::vector<Vertex> without;
      for (Vertex x : mem)
        if (x != o) without.push_back(x);
      EXPECT_EQ(s.marginal_remove(home, o), cut_value(g, without) - s.value(home));
      for (int i = 0; i < 3; ++i) {
        if (i == home) continue;
        auto with = s.members(i);
        with.push_back(o);
        EXPECT_EQ(s.marginal_add(i, o), cut_value(g, with) - s.value(i));
      }
    }
  }
}
