#pragma once

#include <fstream>
#include <map>
#include <string>

#include "json.hpp"

#include "fairdiv/algorithms.hpp"
#include "fairdiv/allocation.hpp"
#include "fairdiv/instances.hpp"
#include "fairdiv/oracle.hpp"

namespace fairdiv {

using json = nlohmann::ordered_json;

inline json to_json(const Allocation& a) {
  json bundles = json::array();
  for (const auto& b : a.bundles()) bundles.push_back(b);
  return bundles;
}

inline json to_json(const FairnessReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) {
    json item = x.item ? json(*x.item) : json(nullptr);
    v.push_back({{"i", x.i}, {"j", x.j}, {"item", item}, {"values", x.values}});
  }
  json out{{"predicate", r.predicate}, {"holds", r.holds}, {"verdict", to_string(r.verdict)}, {"violations", v}};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

inline json allocation_document(const std::string& instance, const Graph& g, int n, SolveGoal goal,
                                const SolveResult& r) {
  std::map<std::string, std::size_t> counts;
  for (auto t : r.trace.case_history) ++counts[to_string(t)];
  json case_counts = json::object();
  for (auto& [k, c] : counts) case_counts[k] = c;
  return json{{"instance", instance},
              {"n", n},
              {"goal", to_string(goal)},
              {"guarantee_achieved", r.guarantee},
              {"algorithm", r.algorithm},
              {"bundles", to_json(r.allocation)},
              {"bundle_values", bundle_values(g, r.allocation)},
              {"trace",
               {{"iterations", r.trace.iterations},
                {"moves", r.trace.moves.size()},
                {"subroutine_invocations", r.trace.subroutine_invocations},
                {"case_counts", case_counts}}}};
}

inline json oracle_report(const json& query, const OracleResult& r, bool timing) {
  json out{{"query", query}, {"verdict", to_string(r.verdict)}};
  if (r.witness) out["witness"] = to_json(*r.witness);
  if (!r.all.empty()) {
    json all = json::array();
    for (const auto& a : r.all) all.push_back(to_json(a));
    out["allocations"] = all;
  }
  out["count"] = r.count;
  out["states_scanned"] = r.states_scanned;
  if (timing) out["elapsed_ms"] = r.elapsed_ms;
  return out;
}

/// Reads {"bundles": [[...], ...]} (0-indexed) or a bare array of bundles.
inline Allocation allocation_from_json(const json& doc, Vertex num_vertices) {
  const json& b = doc.is_object() && doc.contains("bundles") ? doc.at("bundles") : doc;
  if (!b.is_array() || b.empty()) throw InputError("allocation must be a non-empty array of bundles");
  std::vector<std::vector<Vertex>> bundles;
  for (const auto& bundle : b) {
    if (!bundle.is_array()) throw InputError("each bundle must be an array of vertices");
    std::vector<Vertex> items;
    for (const auto& v : bundle) {
      if (!v.is_number_integer()) throw InputError("bundle entries must be integers");
      items.push_back(v.get<Vertex>());
    }
    bundles.push_back(std::move(items));
  }
  return Allocation(num_vertices, std::move(bundles));
}

inline Allocation read_allocation(const std::string& path, Vertex num_vertices) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw InputError("'" + path + "' is not valid JSON");
  return allocation_from_json(doc, num_vertices);
}

inline void write_allocation(const Allocation& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << json{{"n", a.num_agents()}, {"bundles", to_json(a)}}.dump(2) << '\n';
}

}  // namespace fairdiv
