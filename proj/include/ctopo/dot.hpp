#ifndef CTOPO_DOT_HPP
#define CTOPO_DOT_HPP

#include <sstream>
#include <string>

#include "ctopo/designer.hpp"
#include "ctopo/system_model.hpp"

namespace ctopo::dot {

namespace detail {

inline std::string state_id(std::size_t i, std::size_t q) {
  return "x_" + std::to_string(i) + "_" + std::to_string(q);
}

inline std::string state_label(std::size_t i, std::size_t q) {
  return "x[" + std::to_string(i) + "," + std::to_string(q) + "]";
}

}  // namespace detail

/// State digraph with one cluster per subsystem. Interconnections from
/// `overlay` are dashed.
inline std::string digraph(const CompositeInstance& inst, const EdgeSet& overlay = {}) {
  using namespace detail;
  std::ostringstream os;
  os << "digraph composite {\n  rankdir=LR;\n  node [shape=circle];\n";
  const auto uo = inst.input_offsets();
  for (std::size_t i = 0; i < inst.subsystem_count(); ++i) {
    const auto& s = inst.subsystems[i];
    os << "  subgraph cluster_" << i << " {\n    label=\"S" << i << "\";\n";
    for (std::size_t q = 0; q < s.state_dim(); ++q) {
      os << "    " << state_id(i, q) << " [label=\"" << state_label(i, q) << "\"];\n";
    }
    for (std::size_t u = 0; u < s.input_dim(); ++u) {
      os << "    u_" << uo[i] + u << " [label=\"u" << uo[i] + u << "\", shape=box];\n";
    }
    for (const auto& [p, q] : s.a_pattern.nonzeros()) {
      os << "    " << state_id(i, q) << " -> " << state_id(i, p) << ";\n";
    }
    for (const auto& [p, u] : s.b_pattern.nonzeros()) {
      os << "    u_" << uo[i] + u << " -> " << state_id(i, p) << ";\n";
    }
    os << "  }\n";
  }
  for (const auto& e : overlay) {
    os << "  " << state_id(e.src.subsystem, e.src.state) << " -> " << state_id(e.dst.subsystem, e.dst.state)
       << " [style=dashed, color=blue";
    if (e.mode) os << ", label=\"m" << *e.mode << "\"";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

/// Stage-1 bipartite graph. Internal edges solid, interconnection edges
/// dashed; interconnections in `highlight` drawn bold red.
inline std::string bipartite(const CompositeInstance& inst, const EdgeSet& highlight = {}) {
  using namespace detail;
  auto g = build_stage1_bipartite(inst);
  const EdgeSet marked = without_modes(highlight);
  std::ostringstream os;
  os << "graph bipartite {\n  rankdir=LR;\n  node [shape=circle];\n";
  os << "  subgraph cluster_left {\n    label=\"state copies\";\n";
  for (std::size_t l = 0; l < g.state_count(); ++l) {
    const auto& s = g.states[l];
    os << "    l_" << l << " [label=\"" << state_label(s.subsystem, s.state) << "'\"];\n";
  }
  os << "  }\n  subgraph cluster_right {\n    label=\"states and inputs\";\n";
  for (std::size_t r = 0; r < g.graph.right_count(); ++r) {
    if (r < g.state_count()) {
      const auto& s = g.states[r];
      os << "    r_" << r << " [label=\"" << state_label(s.subsystem, s.state) << "\"];\n";
    } else {
      os << "    r_" << r << " [label=\"u" << r - g.state_count() << "\", shape=box];\n";
    }
  }
  os << "  }\n";
  for (const auto& e : g.graph.edges()) {
    os << "  l_" << e.left << " -- r_" << e.right;
    auto ic = g.interconnection(e.left, e.right);
    if (ic && marked.contains(*ic)) {
      os << " [style=bold, color=red]";
    } else if (ic) {
      os << " [style=dashed]";
    }
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

/// SCC condensation with master input u. E1 solid, E2 dashed, E3 red;
/// E2 arcs realized by an edge of `highlight` drawn bold.
inline std::string condensation(const CompositeInstance& inst, const EdgeSet& highlight = {}) {
  auto c = build_condensation(inst);
  const EdgeSet marked = without_modes(highlight);
  std::ostringstream os;
  os << "digraph condensation {\n  rankdir=LR;\n  n0 [label=\"u\", shape=box];\n";
  for (std::size_t g = 0; g < c.scc_nodes.size(); ++g) {
    const auto& node = c.scc_nodes[g];
    os << "  n" << g + 1 << " [label=\"N" << g + 1 << "\\nS" << node.subsystem << " {";
    for (std::size_t k = 0; k < node.states.size(); ++k) os << (k ? "," : "") << node.states[k];
    os << "}\"];\n";
  }
  for (const auto& [a, b] : c.e1) os << "  n" << a << " -> n" << b << ";\n";
  for (const auto& [a, b] : c.e3) os << "  n" << a << " -> n" << b << " [color=red];\n";
  for (const auto& arc : c.e2) {
    bool chosen = false;
    for (const auto& e : c.realizers(arc)) chosen = chosen || marked.contains(e);
    os << "  n" << arc.first << " -> n" << arc.second << (chosen ? " [style=bold, color=blue];\n" : " [style=dashed];\n");
  }
  os << "}\n";
  return os.str();
}

}  // namespace ctopo::dot

#endif  // CTOPO_DOT_HPP
