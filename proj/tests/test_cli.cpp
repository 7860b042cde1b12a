#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fairdiv/cli.hpp"

using namespace fairdiv;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string temp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fairdiv_cli_" + name)).string();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST(Cli, SolveExamples) {
  const auto ok = run({"solve", "--label", "fig3:d=3", "-n", "4", "--goal", "ef1-ts"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const auto doc = json::parse(ok.out);
  const auto g = gen_fig3(3).graph;
  const auto a = allocation_from_json(doc, 5);
  EXPECT_TRUE(check_ef1(g, a).holds);
  EXPECT_TRUE(check_ts(g, a).holds);

  const auto no = run({"solve", "--label", "fig3:d=3", "-n", "3", "--goal", "ef1-ts"});
  EXPECT_EQ(no.code, 2);
  EXPECT_NE(no.err.find("fig3"), std::string::npos);

  EXPECT_EQ(run({"solve", "--label", "fig1", "-n", "3", "--goal", "ef1-so-forest", "-q"}).code, 0);
  EXPECT_EQ(run({"solve", "--label", "fig3", "-n", "3", "--goal", "ef1-so-forest"}).code, 2);
  EXPECT_EQ(run({"solve", "--label", "fig3", "-n", "3", "--goal", "bogus"}).code, 2);
}

TEST(Cli, SolveIsByteIdentical) {
  std::vector<std::string> args{"solve", "--label", "random:m=12,p=0.4,seed=3", "-n", "5", "--goal", "ef1-wts", "--seed", "3", "-q"};
  const auto a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["seed"], 3);
}

TEST(Cli, CheckExamples) {
  const auto so = temp("so.json");
  write(so, R"({"bundles": [[0,5],[1],[2],[3],[4],[6],[7]]})");
  EXPECT_EQ(run({"check", "--label", "fig1", "--alloc", so, "--pred", "so"}).code, 0);
  const auto ef1 = run({"check", "--label", "fig1", "--alloc", so, "--pred", "ef1", "-q"});
  const auto verdict = check_ef1(gen_fig1().graph, Allocation(8, {{0, 5}, {1}, {2}, {3}, {4}, {6}, {7}})).holds;
  EXPECT_EQ(ef1.code, verdict ? 0 : 1);
  EXPECT_EQ(json::parse(ef1.out)["holds"], verdict);

  const auto po = temp("po.json");
  write(po, R"({"bundles": [[0,4],[1],[2],[3],[5],[6],[7]]})");
  EXPECT_EQ(run({"check", "--label", "fig1", "--alloc", po, "--pred", "so"}).code, 1);
  EXPECT_EQ(run({"check", "--label", "fig1", "--alloc", po, "--pred", "po"}).code, 0);
  EXPECT_EQ(run({"check", "--label", "fig1", "--alloc", po, "-n", "3"}).code, 2);

  const auto bad = temp("bad.json");
  write(bad, "this is not json");
  EXPECT_EQ(run({"check", "--label", "fig1", "--alloc", bad}).code, 2);
  EXPECT_EQ(run({"check", "--label", "fig1", "--alloc", temp("missing.json")}).code, 2);
  EXPECT_EQ(run({"check", "--label", "fig1", "--alloc", so, "--pred", "ef9"}).code, 2);
  EXPECT_EQ(run({"check", "--label", "fig1", "--alloc", so, "--pred", "alpha-ef1", "--alpha", "3/2"}).code, 2);
  for (const auto& p : {so, po, bad}) std::filesystem::remove(p);
}

TEST(Cli, OracleExamples) {
  const auto none = run({"oracle", "--label", "fig3:d=3", "-n", "3", "--pred", "ef1,ts"});
  EXPECT_EQ(none.code, 1);
  EXPECT_EQ(json::parse(none.out)["verdict"], "no");

  EXPECT_EQ(run({"oracle", "--label", "appendixA", "--complete-partial"}).code, 1);
  EXPECT_EQ(run({"oracle", "--label", "fig1", "--complete-partial"}).code, 2);

  const auto b3 = run({"oracle", "--label", "appendixB:n=3", "--pred", "ef1,so"});
  EXPECT_EQ(b3.code, 0);
  const auto doc = json::parse(b3.out);
  EXPECT_EQ(doc["verdict"], "yes");
  EXPECT_TRUE(doc.contains("discrepancy"));
  EXPECT_FALSE(doc.contains("elapsed_ms"));
  EXPECT_TRUE(json::parse(run({"oracle", "--label", "appendixB:n=3", "--pred", "ef1,so", "--timing"}).out)
                  .contains("elapsed_ms"));
}

TEST(Cli, OracleThreadsAreDeterministic) {
  const auto one = run({"oracle", "--label", "fig3:d=5", "-n", "3", "--pred", "ef1,wts", "-q"});
  const auto four = run({"oracle", "--label", "fig3:d=5", "-n", "3", "--pred", "ef1,wts", "--threads", "4", "-q"});
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
}

TEST(Cli, OracleCaps) {
  EXPECT_EQ(run({"oracle", "--label", "appendixB:n=5", "-n", "5", "--pred", "ef1"}).code, 2);
  EXPECT_EQ(run({"oracle", "--label", "fig3", "-n", "3", "--pred", "ef1", "--max-states", "10"}).code, 2);
  ::setenv("FAIRDIV_MAX_STATES", "10", 1);
  EXPECT_EQ(run({"oracle", "--label", "fig3", "-n", "3", "--pred", "ef1"}).code, 2);
  ::unsetenv("FAIRDIV_MAX_STATES");
  EXPECT_EQ(run({"oracle", "--label", "fig3", "-n", "3", "--pred", "ef1"}).code, 0);
}

TEST(Cli, GenAndFileSource) {
  const auto path = temp("fig3.txt");
  EXPECT_EQ(run({"gen", "--label", "fig3:d=5", "--out", path}).code, 0);
  const auto r = run({"solve", "--file", path, "-n", "4", "--goal", "ef1-ts", "-q"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["instance"], "fig3:d=5");
  write(path, "p fairdiv 3 1 2\ne 0 1\n");
  EXPECT_EQ(run({"solve", "--file", path, "-n", "2", "--goal", "ef-ts-2"}).code, 2);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"gen", "--list"}).code, 0);
  EXPECT_EQ(run({"gen", "--label", "unknown"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"solve", "--goal", "ef1-ts", "-n", "4"}).code, 2);
  EXPECT_EQ(run({"solve", "--label", "fig1", "--file", "x", "-n", "2", "--goal", "ef-ts-2"}).code, 2);
  EXPECT_EQ(run({"solve", "--label", "fig1", "-n", "zero", "--goal", "ef-ts-2"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, BenchCsv) {
  const auto r = run({"bench", "--reps", "1", "--max-m", "16", "-q"});
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "label,m,edges,n,algorithm,iterations,moves,micros");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_GT(rows, 0);
}

TEST(Cli, ReproFilter) {
  const auto r = run({"repro", "--only", "appendixA", "-q"});
  EXPECT_EQ(r.code, 0);
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["criteria"].size(), 1u);
  EXPECT_EQ(run({"repro", "--only", "no-such-criterion"}).code, 2);
}
