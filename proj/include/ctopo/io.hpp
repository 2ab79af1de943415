#ifndef CTOPO_IO_HPP
#define CTOPO_IO_HPP

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"

#include "ctopo/designer.hpp"
#include "ctopo/errors.hpp"
#include "ctopo/generators.hpp"
#include "ctopo/oracle.hpp"
#include "ctopo/system_model.hpp"

namespace ctopo::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "1.0";

/// Malformed or invalid input document.
class ParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

inline Json parse_text(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

inline void only_fields(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) fail(where, "unknown field \"" + k + "\"");
  }
}

inline std::size_t index(const Json& v, const std::string& where) {
  if (!v.is_number_unsigned()) fail(where, "expected a non-negative integer");
  return v.get<std::size_t>();
}

inline std::pair<std::size_t, std::size_t> index_pair(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) fail(where, "expected a pair [a, b]");
  return {index(v[0], where + "[0]"), index(v[1], where + "[1]")};
}

inline const Json& array(const Json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array");
  return v;
}

inline SparsityPattern pattern(const Json& list, std::size_t rows, std::size_t cols, const std::string& where) {
  std::vector<SparsityPattern::Entry> nz;
  for (std::size_t e = 0; e < array(list, where).size(); ++e) {
    const std::string at = where + "[" + std::to_string(e) + "]";
    auto [r, c] = index_pair(list[e], at);
    if (r >= rows || c >= cols) fail(at, "entry outside the " + std::to_string(rows) + "x" + std::to_string(cols) + " pattern");
    nz.emplace_back(r, c);
  }
  return SparsityPattern(rows, cols, std::move(nz));
}

inline NeighborMap neighbor_map(const Json& list, std::size_t k, const std::string& where) {
  NeighborMap map(k);
  for (std::size_t e = 0; e < array(list, where).size(); ++e) {
    const std::string at = where + "[" + std::to_string(e) + "]";
    auto [i, j] = index_pair(list[e], at);
    if (i >= k || j >= k) fail(at, "subsystem index out of range");
    if (i == j) fail(at, "a subsystem cannot list itself as neighbour");
    map[i].insert(j);
  }
  return map;
}

inline Json neighbor_list(const NeighborMap& map) {
  Json out = Json::array();
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j : map[i]) out.push_back({i, j});
  }
  return out;
}

inline Json pattern_list(const SparsityPattern& p) {
  Json out = Json::array();
  for (const auto& [r, c] : p.nonzeros()) out.push_back({r, c});
  return out;
}

inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace detail

inline Json to_json(const StateRef& s) { return Json::array({s.subsystem, s.state}); }

inline Json to_json(const InterconnectionEdge& e) {
  Json out = {{"src", to_json(e.src)}, {"dst", to_json(e.dst)}};
  if (e.mode) out["mode"] = *e.mode;
  return out;
}

inline Json to_json(const EdgeSet& edges) {
  Json out = Json::array();
  for (const auto& e : edges) out.push_back(to_json(e));
  return out;
}

/// Instance document. Indices are 0-based; [i, j] in "neighbors" lets S_i send
/// state information to S_j.
inline Json to_json(const CompositeInstance& inst) {
  Json doc;
  doc["version"] = kFormatVersion;
  Json subs = Json::array();
  for (std::size_t i = 0; i < inst.subsystem_count(); ++i) {
    const auto& s = inst.subsystems[i];
    subs.push_back({{"id", i},
                    {"state_dim", s.state_dim()},
                    {"input_dim", s.input_dim()},
                    {"a_nonzeros", detail::pattern_list(s.a_pattern)},
                    {"b_nonzeros", detail::pattern_list(s.b_pattern)}});
  }
  doc["subsystems"] = std::move(subs);
  doc["neighbors"] = detail::neighbor_list(inst.neighbors);
  if (inst.weights) {
    Json w = Json::array();
    for (const auto& [key, cost] : *inst.weights) {
      w.push_back({{"src", to_json(key.first)}, {"dst", to_json(key.second)}, {"cost", cost}});
    }
    doc["weights"] = std::move(w);
  }
  if (inst.modes) {
    Json modes = Json::array();
    for (const auto& m : *inst.modes) modes.push_back(detail::neighbor_list(m));
    doc["modes"] = std::move(modes);
  }
  return doc;
}

inline CompositeInstance instance_from_json(const Json& doc) {
  using namespace detail;
  only_fields(doc, {"version", "subsystems", "neighbors", "weights", "modes"}, "instance");
  const Json& version = field(doc, "version", "instance");
  if (!version.is_string()) fail("version", "expected a string");
  if (version.get<std::string>() != kFormatVersion) {
    fail("version", "unsupported format version \"" + version.get<std::string>() + "\"");
  }

  CompositeInstance inst;
  const Json& subs = array(field(doc, "subsystems", "instance"), "subsystems");
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const std::string at = "subsystems[" + std::to_string(i) + "]";
    const Json& s = subs[i];
    only_fields(s, {"id", "state_dim", "input_dim", "a_nonzeros", "b_nonzeros"}, at);
    if (index(field(s, "id", at), at + ".id") != i) fail(at + ".id", "ids must equal the position in the list");
    const std::size_t n = index(field(s, "state_dim", at), at + ".state_dim");
    const std::size_t m = index(field(s, "input_dim", at), at + ".input_dim");
    if (n == 0) fail(at + ".state_dim", "must be positive");
    inst.subsystems.push_back({pattern(field(s, "a_nonzeros", at), n, n, at + ".a_nonzeros"),
                               pattern(field(s, "b_nonzeros", at), n, m, at + ".b_nonzeros")});
  }
  const std::size_t k = inst.subsystem_count();
  inst.neighbors = neighbor_map(field(doc, "neighbors", "instance"), k, "neighbors");

  if (doc.contains("weights")) {
    const Json& list = array(doc["weights"], "weights");
    WeightMap w;
    for (std::size_t e = 0; e < list.size(); ++e) {
      const std::string at = "weights[" + std::to_string(e) + "]";
      only_fields(list[e], {"src", "dst", "cost"}, at);
      auto [i, q] = index_pair(field(list[e], "src", at), at + ".src");
      auto [j, p] = index_pair(field(list[e], "dst", at), at + ".dst");
      const Json& c = field(list[e], "cost", at);
      if (!c.is_number()) fail(at + ".cost", "expected a number");
      if (!w.emplace(std::pair{StateRef{i, q}, StateRef{j, p}}, c.get<double>()).second) {
        fail(at, "duplicate weight entry");
      }
    }
    inst.weights = std::move(w);
  }
  if (doc.contains("modes")) {
    const Json& list = array(doc["modes"], "modes");
    std::vector<NeighborMap> modes;
    for (std::size_t z = 0; z < list.size(); ++z) {
      modes.push_back(neighbor_map(list[z], k, "modes[" + std::to_string(z) + "]"));
    }
    inst.modes = std::move(modes);
  }
  try {
    inst.validate();
  } catch (const InvalidInstance& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  return inst;
}

inline CompositeInstance load_instance(const std::string& path) {
  try {
    return instance_from_json(parse_text(read_file(path), path));
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ParseError(path + ": " + msg);
  }
}

/// Edge overlay: [{"src": [i, q], "dst": [j, p], "mode": z?}, ...].
inline EdgeSet edges_from_json(const Json& doc) {
  using namespace detail;
  EdgeSet out;
  const Json& list = array(doc, "edges");
  for (std::size_t e = 0; e < list.size(); ++e) {
    const std::string at = "edges[" + std::to_string(e) + "]";
    only_fields(list[e], {"src", "dst", "mode"}, at);
    auto [i, q] = index_pair(field(list[e], "src", at), at + ".src");
    auto [j, p] = index_pair(field(list[e], "dst", at), at + ".dst");
    InterconnectionEdge edge{{i, q}, {j, p}, std::nullopt};
    if (list[e].contains("mode")) edge.mode = index(list[e]["mode"], at + ".mode");
    out.insert(edge);
  }
  return out;
}

inline EdgeSet load_edges(const std::string& path) {
  try {
    return edges_from_json(parse_text(read_file(path), path));
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ParseError(path + ": " + msg);
  }
}

/// Undirected graph file: {"vertices": r, "edges": [[a, b], ...]}.
inline UndirectedGraph graph_from_json(const Json& doc) {
  using namespace detail;
  only_fields(doc, {"vertices", "edges"}, "graph");
  UndirectedGraph g;
  g.vertex_count = index(field(doc, "vertices", "graph"), "vertices");
  const Json& list = array(field(doc, "edges", "graph"), "edges");
  for (std::size_t e = 0; e < list.size(); ++e) {
    const std::string at = "edges[" + std::to_string(e) + "]";
    auto [a, b] = index_pair(list[e], at);
    if (a >= g.vertex_count || b >= g.vertex_count) fail(at, "vertex out of range");
    if (a == b) fail(at, "self-loops are not allowed");
    g.add_edge(a, b);
  }
  return g;
}

inline Json to_json(const UndirectedGraph& g) {
  Json edges = Json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  return {{"vertices", g.vertex_count}, {"edges", std::move(edges)}};
}

inline Json to_json(const ControllabilityReport& r) {
  Json states = Json::array();
  for (const auto& s : r.inaccessible_states) states.push_back(to_json(s));
  return {{"controllable", r.controllable},
          {"accessible", r.accessible},
          {"dilation_free", r.dilation_free},
          {"state_count", r.state_count},
          {"matching_size", r.matching_size},
          {"matching_deficiency", r.matching_deficiency()},
          {"inaccessible_states", std::move(states)}};
}

inline Json to_json(const DesignResult& r) {
  return {{"interconnections", r.union_edges.size()},
          {"edges", to_json(r.union_edges)},
          {"stage1_edges", to_json(r.stage1_edges)},
          {"stage2_edges", to_json(r.stage2_edges)},
          {"stage1_cost", r.stage1_cost},
          {"stage2_cost", r.stage2_cost},
          {"union_cost", r.union_cost},
          {"lower_bound", r.lower_bound},
          {"ratio_bound", r.ratio_bound}};
}

inline Json to_json(const OracleResult& r) {
  Json out = {{"optimum_cost", detail::number(r.optimum_cost)},
              {"edges", to_json(r.optimum_edges)},
              {"explored", r.explored}};
  if (r.budget) {
    out["budget"] = *r.budget;
    out["answer"] = r.within_budget.value_or(false) ? "yes" : "no";
  }
  return out;
}

}  // namespace ctopo::io

#endif  // CTOPO_IO_HPP
