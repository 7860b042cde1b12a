#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "fairdiv/fairdiv.hpp"

using namespace fairdiv;

namespace {

Instance parse(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in, "test");
}

std::string expect_parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const InputError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no error for: " << text;
  return "";
}

}  // namespace

TEST(SplitMix64, ReferenceOutputs) {
  // first outputs for seed 0 and seed 1234567
  SplitMix64 a(0);
  EXPECT_EQ(a.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(a.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(a.next(), 0x06c45d188009454fULL);
  SplitMix64 b(1234567);
  EXPECT_EQ(b.next(), 6457827717110365317ULL);
  EXPECT_EQ(b.next(), 3203168211198807973ULL);
}

TEST(SplitMix64, BelowStaysInRange) {
  SplitMix64 r(5);
  for (int t = 0; t < 10000; ++t) EXPECT_LT(r.below(7), 7u);
  EXPECT_THROW(r.below(0), InputError);
  EXPECT_TRUE(r.chance(1.0));
  EXPECT_FALSE(r.chance(0.0));
}

TEST(Generators, Fig1) {
  const auto f = gen_fig1();
  EXPECT_EQ(f.graph.num_vertices(), 8);
  EXPECT_EQ(f.graph.num_edges(), 7);
  EXPECT_EQ(cut_value(f.graph, {0}), 4);
  EXPECT_EQ(cut_value(f.graph, {1, 2}), 2);
  EXPECT_TRUE(is_forest(f.graph));
}

TEST(Generators, Fig3) {
  const auto f = gen_fig3(3);
  EXPECT_EQ(f.graph.num_vertices(), 5);
  EXPECT_EQ(f.graph.num_edges(), 6);
  EXPECT_EQ(cut_value(f.graph, {0, 1}), 6);
  EXPECT_EQ(cut_value(gen_fig3(5).graph, {0, 1}), 10);
  EXPECT_THROW(gen_fig3(4), InputError);
  EXPECT_EQ(f.graph, gen_complete_bipartite(2, 3).graph);
}

TEST(Generators, AppendixA) {
  const auto a = gen_appendix_a();
  ASSERT_TRUE(a.partial);
  EXPECT_EQ(a.graph.num_vertices(), 14);
  EXPECT_EQ(bundle_values(a.graph, *a.partial), (std::vector<Value>{3, 4, 8, 6}));
  EXPECT_EQ(a.partial->assignment()[1], kUnassigned);
}

TEST(Generators, AppendixB) {
  const auto b3 = gen_appendix_b(3);
  EXPECT_EQ(b3.graph.num_vertices(), 7);
  EXPECT_EQ(b3.graph, gen_star(6).graph);

  const auto b4 = gen_appendix_b(4);
  EXPECT_EQ(b4.graph.num_vertices(), 10);
  EXPECT_EQ(b4.graph.degree(0), 9);
  EXPECT_EQ(b4.graph.degree(1), 9);
  for (Vertex v = 2; v < 10; ++v) EXPECT_EQ(b4.graph.degree(v), 2);

  const auto b5 = gen_appendix_b(5);
  std::vector<Vertex> bundle{3, 4, 5, 6, 7};
  EXPECT_EQ(cut_value(b5.graph, bundle), 15);
}

TEST(Generators, Families) {
  const auto c6 = gen_cycle(6);
  EXPECT_EQ(c6.graph.num_edges(), 6);
  for (Vertex v = 0; v < 6; ++v) EXPECT_EQ(c6.graph.degree(v), 2);
  EXPECT_EQ(gen_path(2).graph, Graph(2, {{0, 1}}));
  EXPECT_EQ(gen_complete(5).graph.num_edges(), 10);
  EXPECT_EQ(gen_star(4).graph.degree(0), 4);
}

TEST(Generators, RandomDeterminism) {
  EXPECT_EQ(gen_random_graph(12, 0.3, 99).graph, gen_random_graph(12, 0.3, 99).graph);
  EXPECT_EQ(gen_random_forest(20, 3, 7).graph, gen_random_forest(20, 3, 7).graph);
  EXPECT_EQ(gen_random_graph(6, 1.0, 3).graph, gen_complete(6).graph);
  SplitMix64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const int m = 2 + static_cast<int>(rng.below(30));
    const int trees = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, m / 2))));
    const auto f = gen_random_forest(m, trees, rng.next());
    EXPECT_TRUE(is_forest(f.graph));
    EXPECT_TRUE(isolated_vertices(f.graph).empty());
    EXPECT_EQ(connected_components(f.graph).size(), static_cast<std::size_t>(trees));
  }
}

TEST(Labels, RegistryRoundTrip) {
  for (const std::string label : {"fig1", "fig3", "fig3:d=5", "appendixA", "appendixB:n=4", "cycle:6", "path:4",
                                  "star:6", "complete:5", "kbip:2,3", "random:m=10,p=0.3,seed=5",
                                  "forest:m=12,trees=2,seed=9"}) {
    const auto inst = instance_from_label(label);
    EXPECT_GT(inst.graph.num_vertices(), 0) << label;
  }
  const auto r = gen_random_graph(11, 0.2998, 5647701406944254824ULL);
  EXPECT_EQ(instance_from_label(r.label).graph, r.graph);
  EXPECT_EQ(instance_from_label("fig3").graph, gen_fig3(3).graph);
  EXPECT_THROW(instance_from_label("nope"), InputError);
  EXPECT_THROW(instance_from_label("cycle:x"), InputError);
  EXPECT_THROW(instance_from_label("random:m=5"), InputError);
}

TEST(InstanceFormat, RoundTripAllGenerators) {
  for (const auto& inst : {gen_fig1(), gen_fig3(5), gen_appendix_a(), gen_appendix_b(4), gen_cycle(7),
                           gen_random_graph(15, 0.3, 4), gen_random_forest(20, 3, 2)}) {
    std::ostringstream out;
    write_instance(inst, out);
    std::istringstream in(out.str());
    const auto back = parse_instance(in);
    EXPECT_EQ(back.graph, inst.graph) << inst.label;
    EXPECT_EQ(back.num_agents, inst.num_agents);
    EXPECT_EQ(back.label, inst.label);
    EXPECT_EQ(back.partial, inst.partial);
  }
}

TEST(InstanceFormat, OneIndexedOnDisk) {
  const auto inst = parse("c tiny\np fairdiv 3 2 2\ne 1 2\n   e   2 3  \n");
  EXPECT_TRUE(inst.graph.has_edge(0, 1));
  EXPECT_TRUE(inst.graph.has_edge(1, 2));
  EXPECT_EQ(inst.num_agents, 2);
  const auto reordered = parse("e 2 3\np fairdiv 3 2 2\ne 1 2\n");
  EXPECT_EQ(reordered.graph, inst.graph);
  std::ostringstream out;
  write_instance(inst, out);
  EXPECT_NE(out.str().find("e 1 2"), std::string::npos);
}

TEST(InstanceFormat, ParseErrors) {
  EXPECT_NE(expect_parse_error("p fairdiv 3 1 2\ne 0 1\n").find("test:2:"), std::string::npos);
  expect_parse_error("p fairdiv 3 1 2\ne 1 4\n");
  expect_parse_error("p fairdiv 3 1 2\ne 1 1\n");
  expect_parse_error("p fairdiv 3 2 2\ne 1 2\ne 2 1\n");
  expect_parse_error("p fairdiv 3 2 2\ne 1 2\n");
  expect_parse_error("e 1 2\n");
  expect_parse_error("p fairdiv 3 1 2\np fairdiv 3 1 2\ne 1 2\n");
  expect_parse_error("p fairdiv 3 1 2\nx 1 2\n");
  expect_parse_error("p fairdiv 3 1 2\ne 1\n");
  expect_parse_error("p cnf 3 1 2\ne 1 2\n");
  expect_parse_error("p fairdiv 3 1 0\ne 1 2\n");
  EXPECT_THROW(read_instance("/nonexistent/file.txt"), InputError);
}

TEST(AllocationJson, RoundTripAndErrors) {
  const auto g = gen_fig3(3).graph;
  const auto r = solve_ef1_ts_n4(g, 4);
  const auto doc = allocation_document("fig3:d=3", g, 4, SolveGoal::Ef1Ts, r);
  EXPECT_EQ(allocation_from_json(doc, 5), r.allocation);
  EXPECT_EQ(doc["goal"], "ef1-ts");
  EXPECT_EQ(doc["bundle_values"].size(), 4u);
  EXPECT_EQ(allocation_from_json(json::parse("[[0,1],[2,3,4]]"), 5).num_agents(), 2);
  EXPECT_THROW(allocation_from_json(json::parse("[]"), 5), InputError);
  EXPECT_THROW(allocation_from_json(json::parse("[[0],[\"a\"]]"), 5), InputError);
  EXPECT_THROW(allocation_from_json(json::parse("[[0,9]]"), 5), InputError);
  EXPECT_THROW(allocation_from_json(json::parse("{\"x\":1}"), 5), InputError);

  const auto path = (std::filesystem::temp_directory_path() / "fairdiv_alloc_test.json").string();
  write_allocation(r.allocation, path);
  EXPECT_EQ(read_allocation(path, 5), r.allocation);
  std::filesystem::remove(path);
}
