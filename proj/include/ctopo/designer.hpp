#ifndef CTOPO_DESIGNER_HPP
#define CTOPO_DESIGNER_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ctopo/errors.hpp"
#include "ctopo/graphs.hpp"
#include "ctopo/system_model.hpp"

namespace ctopo {

/// Two-stage design output with its optimality certificate.
struct DesignResult {
  EdgeSet stage1_edges;
  EdgeSet stage2_edges;
  EdgeSet union_edges;
  double stage1_cost = 0.0;
  double stage2_cost = 0.0;
  double union_cost = 0.0;
  double lower_bound = 0.0;
  double ratio_bound = 1.0;

  friend bool operator==(const DesignResult&, const DesignResult&) = default;
};

/// Stage-1 bipartite graph: left x'_p for every composite state, right every
/// state then every input (global numbering).
struct Stage1Graph {
  graphs::BipartiteGraph graph;
  std::vector<StateRef> states;  // global state index -> reference

  std::size_t state_count() const noexcept { return states.size(); }

  /// The interconnection behind a bipartite edge, or nullopt for internal structure.
  std::optional<InterconnectionEdge> interconnection(graphs::Vertex left, graphs::Vertex right) const {
    if (right >= states.size() || states[right].subsystem == states[left].subsystem) return std::nullopt;
    return InterconnectionEdge{states[right], states[left], std::nullopt};
  }
};

namespace detail {

inline double edge_weight(const CompositeInstance& inst, const InterconnectionEdge& e, bool weighted) {
  return weighted ? inst.cost(e) : 1.0;
}

inline double total_cost(const CompositeInstance& inst, const EdgeSet& edges, bool weighted) {
  double sum = 0.0;
  for (const auto& e : edges) sum += edge_weight(inst, e, weighted);
  return sum;
}

}  // namespace detail

inline Stage1Graph build_stage1_bipartite(const CompositeInstance& inst, bool weighted = false) {
  const auto xo = inst.state_offsets();
  const auto uo = inst.input_offsets();
  const std::size_t n = xo.back();
  Stage1Graph out{graphs::BipartiteGraph(n, n + uo.back()), {}};
  out.states.reserve(n);
  for (std::size_t i = 0; i < inst.subsystem_count(); ++i) {
    for (std::size_t p = 0; p < inst.subsystems[i].state_dim(); ++p) out.states.push_back({i, p});
  }

  for (std::size_t i = 0; i < inst.subsystem_count(); ++i) {
    const auto& s = inst.subsystems[i];
    for (const auto& [p, q] : s.a_pattern.nonzeros()) out.graph.add_edge(xo[i] + p, xo[i] + q, 0.0);
    for (const auto& [p, q] : s.b_pattern.nonzeros()) out.graph.add_edge(xo[i] + p, n + uo[i] + q, 0.0);
  }
  // x'^i_p -- x^j_q whenever S_j may send to S_i.
  for (std::size_t j = 0; j < inst.subsystem_count(); ++j) {
    for (std::size_t i : inst.neighbors[j]) {
      for (std::size_t p = 0; p < inst.subsystems[i].state_dim(); ++p) {
        for (std::size_t q = 0; q < inst.subsystems[j].state_dim(); ++q) {
          InterconnectionEdge e{{j, q}, {i, p}, std::nullopt};
          out.graph.add_edge(xo[i] + p, xo[j] + q, detail::edge_weight(inst, e, weighted));
        }
      }
    }
  }
  return out;
}

/// Minimum-cost interconnections restoring a perfect matching.
inline EdgeSet stage1(const CompositeInstance& inst, bool weighted = false) {
  auto g = build_stage1_bipartite(inst, weighted);
  graphs::Matching m;
  try {
    m = graphs::min_weight_perfect_matching(g.graph);
  } catch (const NoPerfectMatching&) {
    throw Stage1Infeasible(check_composite(inst, all_candidate_edges(inst)));
  }
  EdgeSet out;
  for (const auto& [l, r] : m.pairs) {
    if (auto e = g.interconnection(l, r)) out.insert(*e);
  }
  return out;
}

/// Condensation of the per-subsystem state digraphs plus a master input u.
/// Vertex 0 is u; vertex g + 1 is scc_nodes[g].
struct CondensationGraph {
  struct Node {
    std::size_t subsystem = 0;
    std::vector<std::size_t> states;

    friend bool operator==(const Node&, const Node&) = default;
  };
  using Arc = std::pair<graphs::Vertex, graphs::Vertex>;

  static constexpr graphs::Vertex master_input = 0;
  std::vector<Node> scc_nodes;
  std::set<Arc> e1;
  std::set<Arc> e2;
  std::set<Arc> e3;
  std::map<Arc, double> e2_weight;
  std::map<Arc, InterconnectionEdge> e2_realizer;

  std::size_t vertex_count() const noexcept { return scc_nodes.size() + 1; }

  const Node& node(graphs::Vertex v) const { return scc_nodes.at(v - 1); }

  /// Every admissible state pair spanning an E2 arc, sorted.
  std::vector<InterconnectionEdge> realizers(const Arc& arc) const {
    std::vector<InterconnectionEdge> out;
    if (!e2.contains(arc)) return out;
    const Node& a = node(arc.first);
    const Node& b = node(arc.second);
    for (std::size_t q : a.states) {
      for (std::size_t p : b.states) out.push_back({{a.subsystem, q}, {b.subsystem, p}, std::nullopt});
    }
    return out;
  }

  graphs::DiGraph graph() const {
    graphs::DiGraph g(vertex_count());
    for (const auto& [a, b] : e1) g.add_edge(a, b, 0.0);
    for (const auto& [a, b] : e3) g.add_edge(a, b, 0.0);
    for (const auto& arc : e2) g.add_edge(arc.first, arc.second, e2_weight.at(arc));
    return g;
  }
};

inline CondensationGraph build_condensation(const CompositeInstance& inst, bool weighted = false) {
  CondensationGraph out;
  std::vector<std::vector<graphs::Vertex>> vertex_of(inst.subsystem_count());
  std::vector<std::vector<graphs::Vertex>> nodes_of(inst.subsystem_count());

  for (std::size_t i = 0; i < inst.subsystem_count(); ++i) {
    const auto& s = inst.subsystems[i];
    const std::size_t n = s.state_dim();
    graphs::DiGraph d(n);
    for (const auto& [p, q] : s.a_pattern.nonzeros()) d.add_edge(q, p);
    const auto comps = graphs::strongly_connected_components(d);
    const auto local = graphs::component_index(comps, n);

    const graphs::Vertex base = out.scc_nodes.size() + 1;
    for (const auto& c : comps) {
      nodes_of[i].push_back(out.scc_nodes.size() + 1);
      out.scc_nodes.push_back({i, c});
    }
    vertex_of[i].resize(n);
    for (std::size_t x = 0; x < n; ++x) vertex_of[i][x] = base + local[x];

    for (const auto& arc : d.edges()) {
      if (local[arc.from] != local[arc.to]) out.e1.insert({vertex_of[i][arc.from], vertex_of[i][arc.to]});
    }
    std::vector<graphs::Vertex> sources(s.input_dim());
    for (std::size_t q = 0; q < s.input_dim(); ++q) sources[q] = n + q;
    const auto reached = graphs::reachable_from(system_digraph(s.a_pattern, s.b_pattern), sources);
    for (auto x : reached) {
      if (x < n) out.e3.insert({CondensationGraph::master_input, vertex_of[i][x]});
    }
  }

  for (std::size_t i = 0; i < inst.subsystem_count(); ++i) {
    for (std::size_t j : inst.neighbors[i]) {
      for (graphs::Vertex g : nodes_of[i]) {
        for (graphs::Vertex h : nodes_of[j]) {
          CondensationGraph::Arc arc{g, h};
          out.e2.insert(arc);
          std::optional<InterconnectionEdge> best;
          double best_w = 0.0;
          for (const auto& e : out.realizers(arc)) {
            double w = detail::edge_weight(inst, e, weighted);
            if (!best || w < best_w) {
              best = e;
              best_w = w;
            }
          }
          out.e2_weight[arc] = best_w;
          out.e2_realizer[arc] = *best;
        }
      }
    }
  }
  return out;
}

namespace detail {

struct Stage2Outcome {
  EdgeSet edges;
  std::vector<CondensationGraph::Arc> tree;
};

inline Stage2Outcome stage2_tree(const CompositeInstance& inst, bool weighted) {
  auto cond = build_condensation(inst, weighted);
  graphs::Arborescence tree;
  try {
    tree = graphs::min_spanning_arborescence(cond.graph(), CondensationGraph::master_input);
  } catch (const NotSpannable&) {
    throw Stage2Infeasible(check_composite(inst, all_candidate_edges(inst)));
  }
  Stage2Outcome out;
  out.tree = tree.tree_edges;
  for (const auto& arc : tree.tree_edges) {
    auto it = cond.e2_realizer.find(arc);
    if (it != cond.e2_realizer.end()) out.edges.insert(it->second);
  }
  return out;
}

inline DesignResult run_design(const CompositeInstance& inst, bool weighted) {
  inst.validate();
  auto full = check_composite(inst, all_candidate_edges(inst));
  if (!full.controllable) throw Infeasible(full);

  DesignResult r;
  r.stage1_edges = stage1(inst, weighted);
  r.stage2_edges = stage2_tree(inst, weighted).edges;
  r.union_edges = r.stage1_edges;
  r.union_edges.insert(r.stage2_edges.begin(), r.stage2_edges.end());
  r.stage1_cost = total_cost(inst, r.stage1_edges, weighted);
  r.stage2_cost = total_cost(inst, r.stage2_edges, weighted);
  r.union_cost = total_cost(inst, r.union_edges, weighted);
  r.lower_bound = std::max(r.stage1_cost, r.stage2_cost);
  r.ratio_bound = r.lower_bound > 0.0 ? r.union_cost / r.lower_bound : 1.0;

  auto verdict = check_composite(inst, r.union_edges);
  if (!verdict.controllable) {
    throw Error("internal error: designed topology fails the structural test: " + describe(verdict));
  }
  return r;
}

}  // namespace detail

/// Minimum-cost interconnections restoring accessibility of every state.
inline EdgeSet stage2(const CompositeInstance& inst, bool weighted = false) {
  return detail::stage2_tree(inst, weighted).edges;
}

/// Two-stage design with unit interconnection cost.
inline DesignResult design(const CompositeInstance& inst) { return detail::run_design(inst, false); }

/// Two-stage design with the instance's interconnection costs (uniform 1 when absent).
inline DesignResult design_weighted(const CompositeInstance& inst) { return detail::run_design(inst, true); }

/// Design over the union of all modes. Each edge carries the smallest mode admitting it.
inline DesignResult design_switched(const CompositeInstance& inst, bool weighted = false) {
  auto u = union_instance(inst);
  auto r = detail::run_design(u.instance, weighted);
  auto tag = [&](const EdgeSet& edges) {
    EdgeSet out;
    for (auto e : edges) {
      e.mode = u.first_mode(e.src.subsystem, e.dst.subsystem);
      out.insert(e);
    }
    return out;
  };
  r.stage1_edges = tag(r.stage1_edges);
  r.stage2_edges = tag(r.stage2_edges);
  r.union_edges = tag(r.union_edges);
  return r;
}

}  // namespace ctopo

#endif  // CTOPO_DESIGNER_HPP
