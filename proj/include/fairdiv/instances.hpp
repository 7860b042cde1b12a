#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fairdiv/allocation.hpp"
#include "fairdiv/error.hpp"
#include "fairdiv/graph.hpp"

namespace fairdiv {

struct Instance {
  Graph graph;
  int num_agents = 1;
  std::string label;
  std::optional<Allocation> partial;
};

/**
 * SplitMix64. state += 0x9e3779b97f4a7c15, then the output is the state
 * mixed by two xor-shift-multiply rounds and a final xor-shift.
 */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    FAIRDIV_REQUIRE(bound > 0, "empty range");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// True with probability p, decided on the top 53 bits.
  bool chance(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    const auto cut = static_cast<std::uint64_t>(p * 9007199254740992.0);
    return (next() >> 11) < cut;
  }

 private:
  std::uint64_t state_;
};

namespace detail {

inline Instance make_instance(Vertex m, std::vector<Edge> edges, int n, std::string label) {
  return Instance{Graph(m, std::move(edges)), n, std::move(label), std::nullopt};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Named instances

/// o1..o8 as 0..7: o1 joined to o2..o5, o5 joined to o6..o8.
inline Instance gen_fig1() {
  return detail::make_instance(8, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {4, 5}, {4, 6}, {4, 7}}, 4, "fig1");
}

/// o_a = 0, o_b = 1, c_1..c_d = 2..d+1; every c_t joined to both hubs.
inline Instance gen_fig3(int d) {
  FAIRDIV_REQUIRE(d >= 3 && d % 2 == 1, "fig3 needs odd d >= 3");
  std::vector<Edge> edges;
  for (Vertex c = 2; c < d + 2; ++c) {
    edges.push_back({0, c});
    edges.push_back({1, c});
  }
  return detail::make_instance(d + 2, std::move(edges), 3, "fig3:d=" + std::to_string(d));
}

/// Three stars on o1..o14 (0..13) plus the four-bundle partial allocation; o2 is left out.
inline Instance gen_appendix_a() {
  std::vector<Edge> edges{{0, 1}, {0, 2}, {0, 3}};
  for (Vertex v = 5; v <= 9; ++v) edges.push_back({4, v});
  for (Vertex v = 11; v <= 13; ++v) edges.push_back({10, v});
  Instance inst = detail::make_instance(14, std::move(edges), 4, "appendixA");
  inst.partial = Allocation(14, {{0}, {2, 3, 5, 6}, {4, 11, 12, 13}, {7, 8, 9, 10}});
  return inst;
}

/// n-2 singleton parts 0..n-3 and one part of 2n vertices; all cross-part pairs joined.
inline Instance gen_appendix_b(int n) {
  FAIRDIV_REQUIRE(n >= 3, "appendixB needs n >= 3");
  const Vertex singles = n - 2, m = singles + 2 * n;
  std::vector<Edge> edges;
  for (Vertex u = 0; u < singles; ++u)
    for (Vertex v = u + 1; v < m; ++v) edges.push_back({u, v});
  return detail::make_instance(m, std::move(edges), n, "appendixB:n=" + std::to_string(n));
}

inline Instance gen_cycle(int k) {
  FAIRDIV_REQUIRE(k >= 3, "cycle needs k >= 3");
  std::vector<Edge> edges;
  for (Vertex v = 0; v < k; ++v) edges.push_back({v, (v + 1) % k});
  return detail::make_instance(k, std::move(edges), 2, "cycle:" + std::to_string(k));
}

inline Instance gen_path(int k) {
  FAIRDIV_REQUIRE(k >= 2, "path needs k >= 2");
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < k; ++v) edges.push_back({v, v + 1});
  return detail::make_instance(k, std::move(edges), 2, "path:" + std::to_string(k));
}

/// Centre 0 and k leaves.
inline Instance gen_star(int k) {
  FAIRDIV_REQUIRE(k >= 1, "star needs k >= 1 leaves");
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= k; ++v) edges.push_back({0, v});
  return detail::make_instance(k + 1, std::move(edges), 2, "star:" + std::to_string(k));
}

inline Instance gen_complete(int k) {
  FAIRDIV_REQUIRE(k >= 2, "complete graph needs k >= 2");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < k; ++u)
    for (Vertex v = u + 1; v < k; ++v) edges.push_back({u, v});
  return detail::make_instance(k, std::move(edges), 2, "complete:" + std::to_string(k));
}

/// Sides 0..a-1 and a..a+b-1.
inline Instance gen_complete_bipartite(int a, int b) {
  FAIRDIV_REQUIRE(a >= 1 && b >= 1, "complete bipartite graph needs both sides non-empty");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < a; ++u)
    for (Vertex v = a; v < a + b; ++v) edges.push_back({u, v});
  return detail::make_instance(a + b, std::move(edges), 2, "kbip:" + std::to_string(a) + "," + std::to_string(b));
}

// ---------------------------------------------------------------------------
// Random families

inline constexpr int kMaxResamples = 100000;

/// G(m, p) without isolated vertices; redraws from the same stream until none remain.
inline Instance gen_random_graph(Vertex m, double p, std::uint64_t seed) {
  FAIRDIV_REQUIRE(m >= 2, "random graph needs m >= 2");
  FAIRDIV_REQUIRE(p > 0.0 && p <= 1.0, "edge probability must lie in (0, 1]");
  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    std::vector<Edge> edges;
    std::vector<int> deg(m, 0);
    for (Vertex u = 0; u < m; ++u)
      for (Vertex v = u + 1; v < m; ++v)
        if (rng.chance(p)) {
          edges.push_back({u, v});
          ++deg[u];
          ++deg[v];
        }
    if (std::find(deg.begin(), deg.end(), 0) != deg.end()) continue;
    char buf[32];
    const auto end = std::to_chars(buf, buf + sizeof buf, p).ptr;
    std::ostringstream label;
    label << "random:m=" << m << ",p=" << std::string(buf, end) << ",seed=" << seed;
    return detail::make_instance(m, std::move(edges), 2, label.str());
  }
  throw InputError("random graph: could not avoid isolated vertices; raise p");
}

/**
 * Random forest with `trees` components and no isolated vertex: random
 * recursive tree, random relabelling, then `trees - 1` random edges cut.
 */
inline Instance gen_random_forest(Vertex m, int trees, std::uint64_t seed) {
  FAIRDIV_REQUIRE(trees >= 1, "random forest needs at least one tree");
  FAIRDIV_REQUIRE(m >= 2 * static_cast<Vertex>(trees), "random forest needs m >= 2 * trees");
  SplitMix64 rng(seed);
  std::vector<Vertex> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  for (Vertex i = m - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  // every tree gets two vertices, the rest are spread uniformly
  std::vector<Vertex> sizes(static_cast<std::size_t>(trees), 2);
  if (trees == 1) {
    sizes[0] = m;
  } else {
    for (Vertex extra = 2 * static_cast<Vertex>(trees); extra < m; ++extra)
      ++sizes[rng.below(static_cast<std::uint64_t>(trees))];
  }
  std::vector<Edge> edges;
  Vertex start = 0;
  for (Vertex size : sizes) {
    for (Vertex v = 1; v < size; ++v) {
      auto parent = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(v)));
      edges.push_back({perm[start + parent], perm[start + v]});
    }
    start += size;
  }
  return detail::make_instance(m, std::move(edges), 2,
                               "forest:m=" + std::to_string(m) + ",trees=" + std::to_string(trees) +
                                   ",seed=" + std::to_string(seed));
}

// ---------------------------------------------------------------------------
// Label registry

namespace detail {

struct LabelArgs {
  std::vector<std::string> positional;
  std::map<std::string, std::string> named;

  std::string get(const std::string& key, std::size_t pos, const std::string& fallback, const std::string& label) const {
    if (auto it = named.find(key); it != named.end()) return it->second;
    if (pos < positional.size()) return positional[pos];
    if (!fallback.empty()) return fallback;
    throw InputError("label '" + label + "' is missing parameter '" + key + "'");
  }
};

inline long long to_int(const std::string& s, const std::string& label) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw InputError("label '" + label + "': '" + s + "' is not an integer");
  return v;
}

inline double to_real(const std::string& s, const std::string& label) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw InputError("label '" + label + "': '" + s + "' is not a number");
  return v;
}

}  // namespace detail

inline const std::vector<std::string>& known_labels() {
  static const std::vector<std::string> labels{
      "fig1",        "fig3:d=<odd>",  "appendixA",        "appendixB:n=<k>",
      "cycle:<k>",   "path:<k>",      "star:<leaves>",    "complete:<k>",
      "kbip:<a>,<b>", "random:m=<m>,p=<p>,seed=<s>", "forest:m=<m>,trees=<t>,seed=<s>"};
  return labels;
}

/// Builds a named instance, e.g. "fig3:d=5", "appendixB:n=4", "cycle:6".
inline Instance instance_from_label(const std::string& label) {
  const auto colon = label.find(':');
  const std::string name = label.substr(0, colon);
  detail::LabelArgs args;
  if (colon != std::string::npos) {
    std::stringstream ss(label.substr(colon + 1));
    for (std::string tok; std::getline(ss, tok, ',');) {
      if (auto eq = tok.find('='); eq != std::string::npos)
        args.named[tok.substr(0, eq)] = tok.substr(eq + 1);
      else
        args.positional.push_back(tok);
    }
  }
  auto integer = [&](const std::string& key, std::size_t pos, const std::string& fallback = "") {
    return detail::to_int(args.get(key, pos, fallback, label), label);
  };
  auto vertices = [&](const std::string& key, std::size_t pos) {
    auto v = integer(key, pos);
    FAIRDIV_REQUIRE(v >= 0 && v <= kMaxVertices, "label '" + label + "': size out of range");
    return static_cast<int>(v);
  };

  if (name == "fig1") return gen_fig1();
  if (name == "fig3") return gen_fig3(static_cast<int>(integer("d", 0, "3")));
  if (name == "appendixA") return gen_appendix_a();
  if (name == "appendixB") return gen_appendix_b(vertices("n", 0));
  if (name == "cycle") return gen_cycle(vertices("k", 0));
  if (name == "path") return gen_path(vertices("k", 0));
  if (name == "star") return gen_star(vertices("k", 0));
  if (name == "complete") return gen_complete(vertices("k", 0));
  if (name == "kbip") return gen_complete_bipartite(vertices("a", 0), vertices("b", 1));
  if (name == "random") {
    Instance inst = gen_random_graph(vertices("m", 0), detail::to_real(args.get("p", 1, "", label), label),
                                     static_cast<std::uint64_t>(integer("seed", 2, "0")));
    inst.label = label;
    return inst;
  }
  if (name == "forest") {
    Instance inst = gen_random_forest(vertices("m", 0), static_cast<int>(integer("trees", 1, "1")),
                                      static_cast<std::uint64_t>(integer("seed", 2, "0")));
    inst.label = label;
    return inst;
  }
  throw InputError("unknown instance label '" + label + "'");
}

// ---------------------------------------------------------------------------
// Text format: "p fairdiv m E n", "c ...", "e u v", "a v agent" (1-indexed).

inline void write_instance(const Instance& inst, std::ostream& out) {
  if (!inst.label.empty()) out << "c " << inst.label << '\n';
  out << "p fairdiv " << inst.graph.num_vertices() << ' ' << inst.graph.num_edges() << ' ' << inst.num_agents << '\n';
  for (auto [u, v] : inst.graph.edges()) out << "e " << u + 1 << ' ' << v + 1 << '\n';
  if (inst.partial)
    for (int i = 0; i < inst.partial->num_agents(); ++i)
      for (Vertex o : inst.partial->bundle(i)) out << "a " << o + 1 << ' ' << i + 1 << '\n';
}

inline Instance parse_instance(std::istream& in, const std::string& source = "<input>") {
  auto fail = [&](std::size_t line, const std::string& msg) -> InputError {
    return InputError(source + ":" + std::to_string(line) + ": " + msg);
  };
  std::optional<long long> m, num_edges, n;
  std::size_t header_line = 0;
  std::vector<std::pair<std::size_t, std::pair<long long, long long>>> edge_lines, assign_lines;
  std::string label, text;
  std::size_t lineno = 0;
  while (std::getline(in, text)) {
    ++lineno;
    std::istringstream ls(text);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "c") {
      if (label.empty()) {
        std::string rest;
        std::getline(ls >> std::ws, rest);
        label = rest;
      }
      continue;
    }
    auto read_two = [&](long long& a, long long& b) {
      std::string extra;
      if (!(ls >> a >> b)) throw fail(lineno, "expected two integers after '" + tag + "'");
      if (ls >> extra) throw fail(lineno, "trailing token '" + extra + "'");
    };
    if (tag == "p") {
      if (m) throw fail(lineno, "second header line");
      std::string kind, extra;
      long long a, b, c;
      if (!(ls >> kind >> a >> b >> c) || kind != "fairdiv") throw fail(lineno, "header must be 'p fairdiv <m> <edges> <n>'");
      if (ls >> extra) throw fail(lineno, "trailing token '" + extra + "'");
      if (a < 0 || a > kMaxVertices) throw fail(lineno, "vertex count out of range");
      if (b < 0) throw fail(lineno, "negative edge count");
      if (c < 1) throw fail(lineno, "need at least one agent");
      m = a, num_edges = b, n = c;
      header_line = lineno;
    } else if (tag == "e") {
      long long u, v;
      read_two(u, v);
      edge_lines.push_back({lineno, {u, v}});
    } else if (tag == "a") {
      long long o, i;
      read_two(o, i);
      assign_lines.push_back({lineno, {o, i}});
    } else {
      throw fail(lineno, "unknown line type '" + tag + "'");
    }
  }
  if (!m) throw fail(lineno, "missing 'p fairdiv' header");
  std::vector<Edge> edges;
  for (auto& [line, uv] : edge_lines) {
    auto [u, v] = uv;
    if (u < 1 || u > *m || v < 1 || v > *m)
      throw fail(line, "edge endpoint out of range 1.." + std::to_string(*m));
    if (u == v) throw fail(line, "self-loop at vertex " + std::to_string(u));
    edges.push_back({static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1)});
  }
  if (static_cast<long long>(edges.size()) != *num_edges)
    throw fail(header_line, "header declares " + std::to_string(*num_edges) + " edges, found " +
                                std::to_string(edges.size()));
  Instance inst;
  try {
    inst.graph = Graph(static_cast<Vertex>(*m), std::move(edges));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
  inst.num_agents = static_cast<int>(*n);
  inst.label = label;
  if (!assign_lines.empty()) {
    std::vector<int> assignment(static_cast<std::size_t>(*m), kUnassigned);
    for (auto& [line, oi] : assign_lines) {
      auto [o, i] = oi;
      if (o < 1 || o > *m) throw fail(line, "vertex out of range 1.." + std::to_string(*m));
      if (i < 1 || i > *n) throw fail(line, "agent out of range 1.." + std::to_string(*n));
      if (assignment[o - 1] != kUnassigned) throw fail(line, "vertex " + std::to_string(o) + " assigned twice");
      assignment[o - 1] = static_cast<int>(i - 1);
    }
    inst.partial = Allocation::from_assignment(inst.num_agents, assignment);
  }
  return inst;
}

inline Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_instance(in, path);
}

inline void write_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_instance(inst, out);
}

}  // namespace fairdiv
