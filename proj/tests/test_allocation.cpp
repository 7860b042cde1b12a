#include <gtest/gtest.h>

#include "fairdiv/fairdiv.hpp"

using namespace fairdiv;

namespace {

Allocation random_allocation(SplitMix64& rng, Vertex m, int n) {
  std::vector<int> a(static_cast<std::size_t>(m));
  for (auto& b : a) b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  return Allocation::from_assignment(n, a);
}

bool has_pair(const FairnessReport& r, int i, int j) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.i == i && v.j == j; });
}

}  // namespace

TEST(Allocation, RejectsBadBundles) {
  EXPECT_THROW(Allocation(3, {{0, 1}, {1}}), InputError);
  EXPECT_THROW(Allocation(3, {{0, 3}}), InputError);
  EXPECT_THROW(Allocation(3, {}), InputError);
}

TEST(Allocation, SortBundles) {
  EXPECT_EQ(sorted_order({5, 2, 2}), (std::vector<int>{1, 2, 0}));
  EXPECT_EQ(sorted_order({1, 2, 3}), (std::vector<int>{0, 1, 2}));
  const auto g = gen_fig3(3).graph;
  Allocation a(5, {{2, 3}, {0}, {1}});
  EXPECT_EQ(bundle_values(g, a), (std::vector<Value>{4, 3, 3}));
  EXPECT_EQ(sort_bundles(g, a).bundles(), (std::vector<std::vector<Vertex>>{{0}, {1}, {2, 3}}));
  const auto once = sort_bundles(g, a);
  EXPECT_EQ(sort_bundles(g, once), once);
}

TEST(Allocation, EnvyFreeness) {
  const auto g = gen_fig3(3).graph;
  const auto r = check_ef(g, Allocation(5, {{0}, {1}, {2, 3, 4}}));
  EXPECT_FALSE(r.holds);
  EXPECT_TRUE(has_pair(r, 0, 2));
  SplitMix64 rng(1);
  for (int t = 0; t < 50; ++t) EXPECT_TRUE(check_ef(g, random_allocation(rng, 5, 2)).holds);
  EXPECT_TRUE(check_ef(g, Allocation(5, {{}, {}})).holds);
}

TEST(Allocation, Ef1Examples) {
  const auto f1 = gen_fig1().graph;
  const auto r = check_ef1(f1, Allocation(8, {{0, 2}, {1}}));
  EXPECT_FALSE(has_pair(r, 1, 0));

  const auto a = gen_appendix_a();
  EXPECT_EQ(bundle_values(a.graph, *a.partial), (std::vector<Value>{3, 4, 8, 6}));
  EXPECT_TRUE(check_ef1(a.graph, *a.partial).holds);

  const auto g = gen_fig3(3).graph;
  const auto bad = check_ef1(g, Allocation(5, {{0, 1}, {2}, {3, 4}}));
  EXPECT_FALSE(bad.holds);
  EXPECT_TRUE(has_pair(bad, 1, 0));
  EXPECT_EQ(bad.violations.front().values, (std::vector<Value>{2, 6, 3}));
}

TEST(Allocation, AlphaEf1) {
  SplitMix64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const auto g = gen_random_graph(7, 0.4, rng.next()).graph;
    const auto a = random_allocation(rng, 7, 3);
    EXPECT_EQ(check_alpha_ef1(g, a, Ratio{1, 1}).holds, check_ef1(g, a).holds);
    EXPECT_EQ(check_alpha_ef1(g, a, Ratio{3, 3}).holds, check_ef1(g, a).holds);
    if (check_ef1(g, a).holds) {
      EXPECT_TRUE(check_alpha_ef1(g, a, Ratio{1, 2}).holds);
    }
  }
  const auto star = gen_appendix_b(3).graph;
  EXPECT_TRUE(check_alpha_ef1(star, Allocation(7, {{0}, {1, 2, 3}, {4, 5, 6}}), Ratio{1, 2}).holds);
  EXPECT_THROW(check_alpha_ef1(star, Allocation(7, {{0}}), Ratio{3, 2}), InputError);
  EXPECT_THROW(check_alpha_ef1(star, Allocation(7, {{0}}), Ratio{0, 1}), InputError);
}

TEST(Allocation, AlphaEf1IsExact) {
  // v(A_1) = 1 against a drop value of 2: equality at alpha = 1/2
  Graph g(6, {{0, 2}, {1, 5}, {3, 4}, {3, 5}});
  Allocation a(6, {{1, 3}, {2}, {0, 4, 5}});
  EXPECT_EQ(bundle_values(g, a), (std::vector<Value>{3, 1, 4}));
  EXPECT_EQ(min_drop_item(g, a, 2)->remaining, 2);
  EXPECT_TRUE(check_alpha_ef1(g, a, Ratio{1, 2}).holds);
  EXPECT_FALSE(check_alpha_ef1(g, a, Ratio{2, 3}).holds);
}

TEST(Allocation, LeastAgentEf1AgreesWithPairwise) {
  SplitMix64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    const auto g = gen_random_graph(4 + static_cast<int>(rng.below(8)), 0.4, rng.next()).graph;
    const auto a = random_allocation(rng, g.num_vertices(), 2 + static_cast<int>(rng.below(4)));
    EXPECT_EQ(check_ef1(g, a).holds, check_ef1_least_agent(g, a).holds);
  }
}

TEST(Allocation, Ef1UnchangedByIsolatedVertex) {
  SplitMix64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const auto inst = gen_random_graph(6, 0.5, rng.next());
    auto edges = inst.graph.edges();
    const Graph bigger(7, edges);
    const auto a = random_allocation(rng, 6, 3);
    auto bundles = a.bundles();
    bundles[rng.below(3)].push_back(6);
    EXPECT_EQ(check_ef1(inst.graph, a).holds, check_ef1(bigger, Allocation(7, bundles)).holds);
  }
}

TEST(Allocation, TransferStability) {
  const auto f1 = gen_fig1().graph;
  EXPECT_TRUE(check_ts(f1, Allocation(8, {{0, 4}, {1, 5}, {2, 6}, {3, 7}})).holds);

  const auto g = gen_fig3(3).graph;
  Allocation a(5, {{0, 4}, {1}, {2, 3}});
  const auto ts = check_ts(g, a);
  EXPECT_FALSE(ts.holds);
  bool found = false;
  for (const auto& v : ts.violations)
    found = found || (v.i == 0 && v.j == 2 && v.item == 4 && v.values == std::vector<Value>{0, 2});
  EXPECT_TRUE(found);
  EXPECT_TRUE(check_wts(g, a).holds);

  EXPECT_TRUE(check_ts(g, Allocation(5, {{0, 1, 2, 3, 4}})).holds);
  EXPECT_THROW(check_ts(g, Allocation(5, {{0}, {1}})), InputError);
}

TEST(Allocation, WeakTransferStability) {
  const auto c6 = gen_cycle(6).graph;
  Allocation a(6, {{0, 1}, {2, 3}, {4, 5}});
  EXPECT_TRUE(check_wts(c6, a).holds);
  EXPECT_FALSE(check_ts(c6, a).holds);
}

TEST(Allocation, SocialOptimality) {
  const auto f1 = gen_fig1().graph;
  Allocation so(8, {{0, 5}, {1}, {2}, {3}, {4}, {6}, {7}});
  EXPECT_EQ(social_welfare(f1, so), 14);
  EXPECT_TRUE(check_so(f1, so).holds);
  const auto not_so = check_so(f1, Allocation(8, {{0, 4}, {1}, {2}, {3}, {5}, {6}, {7}}));
  EXPECT_FALSE(not_so.holds);
  EXPECT_EQ(not_so.verdict, Verdict::No);
  EXPECT_FALSE(check_so(f1, Allocation(8, {{0, 1, 2, 3, 4, 5, 6, 7}, {}})).holds);
  EXPECT_TRUE(check_so(f1, Allocation(8, {{0, 1, 2, 3, 4, 5, 6, 7}})).holds);

  const auto g = gen_fig3(3).graph;
  EXPECT_TRUE(check_so(g, Allocation(5, {{0, 1}, {2, 3}, {4}})).holds);
  Allocation low(5, {{0, 2}, {1, 3}, {4}});
  EXPECT_EQ(check_so(g, low).verdict, Verdict::Unknown);
  EXPECT_EQ(check_so(g, low, oracle_welfare_fallback()).verdict, Verdict::No);

  const auto k4 = gen_complete(4).graph;
  Allocation halves(4, {{0, 1}, {2, 3}});
  EXPECT_EQ(check_so(k4, halves).verdict, Verdict::Unknown);
  EXPECT_EQ(check_so(k4, halves, oracle_welfare_fallback()).verdict, Verdict::Yes);
}

TEST(Allocation, SocialWelfareCountsEdges) {
  SplitMix64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto g = gen_random_graph(9, 0.4, rng.next()).graph;
    const auto a = random_allocation(rng, 9, 3);
    const auto asg = a.assignment();
    Value cross = 0;
    for (auto [u, v] : g.edges()) cross += asg[u] != asg[v] ? 2 : 0;
    EXPECT_EQ(social_welfare(g, a), cross);
  }
  EXPECT_EQ(social_welfare(gen_fig1().graph, Allocation(8, {{0, 1, 2, 3, 4, 5, 6, 7}})), 0);
}

TEST(Allocation, Potentials) {
  EXPECT_EQ(potential({2, 2, 5}), (Potential{2, -2}));
  EXPECT_EQ(potential({0, 3, 3}), (Potential{0, -1}));
  EXPECT_EQ(potential({3, 3, 4}), (Potential{3, -2}));
  EXPECT_THROW(potential({3, 2}), InputError);
  EXPECT_LT((Potential{2, -2}), (Potential{2, -1}));
  EXPECT_LT((Potential{2, -1}), (Potential{3, -5}));
}

TEST(Allocation, MinDropItem) {
  const auto a = gen_appendix_a();
  const auto d = min_drop_item(a.graph, *a.partial, 2);
  ASSERT_TRUE(d);
  EXPECT_EQ(d->item, 4);
  EXPECT_EQ(d->remaining, 3);

  const auto f1 = gen_fig1().graph;
  Allocation s(8, {{3}, {}, {0, 5, 6, 7}});
  EXPECT_EQ(min_drop_item(f1, s, 0), (DropItem{3, 0}));
  EXPECT_FALSE(min_drop_item(f1, s, 1));
  EXPECT_EQ(min_drop_item(f1, s, 2)->item, 0);
}

TEST(Allocation, ImplicationChain) {
  SplitMix64 rng(6);
  int so_seen = 0, po_seen = 0;
  for (int t = 0; t < 1000; ++t) {
    const int m = 3 + static_cast<int>(rng.below(4));
    const int n = 2 + static_cast<int>(rng.below(2));
    const auto g = gen_random_graph(m, 0.5, rng.next()).graph;
    const auto a = random_allocation(rng, m, n);
    const bool so = check_so(g, a, oracle_welfare_fallback()).holds;
    const bool po = oracle_pareto(a, g, n);
    const bool ts = check_ts(g, a).holds;
    const bool wts = check_wts(g, a).holds;
    so_seen += so;
    po_seen += po;
    if (so) {
      EXPECT_TRUE(po);
    }
    if (po) {
      EXPECT_TRUE(ts);
    }
    if (ts) {
      EXPECT_TRUE(wts);
    }
  }
  EXPECT_GT(so_seen, 0);
  EXPECT_GT(po_seen, so_seen);
}

TEST(Allocation, ReportJson) {
  const auto g = gen_fig3(3).graph;
  const auto j = to_json(check_ef1(g, Allocation(5, {{0, 1}, {2}, {3, 4}})));
  EXPECT_EQ(j["predicate"], "EF1");
  EXPECT_EQ(j["holds"], false);
  ASSERT_FALSE(j["violations"].empty());
  const auto& v = j["violations"][0];
  EXPECT_TRUE(v.contains("i") && v.contains("j") && v.contains("item") && v.contains("values"));
}
