#ifndef CTOPO_GRAPHS_SCC_HPP
#define CTOPO_GRAPHS_SCC_HPP

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>
#include <span>
#include <vector>

#include "ctopo/graphs/digraph.hpp"

namespace ctopo::graphs {

/// Vertices reachable from any of `sources`, sources included, ascending.
inline std::vector<Vertex> reachable_from(const DiGraph& g, std::span<const Vertex> sources) {
  const auto succ = g.successors();
  std::vector<char> seen(g.vertex_count(), 0);
  std::deque<Vertex> queue;
  for (Vertex s : sources) {
    if (s >= g.vertex_count()) throw InvalidArgument("source vertex out of range");
    if (!seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Vertex w : succ[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (seen[v]) out.push_back(v);
  }
  return out;
}

inline std::vector<Vertex> reachable_from(const DiGraph& g, std::initializer_list<Vertex> sources) {
  return reachable_from(g, std::span<const Vertex>(sources.begin(), sources.size()));
}

/// Strongly connected components in topological order of the condensation
/// (sources first). Among components that are simultaneously available the one
/// with the smallest member vertex comes first; members are sorted ascending.
inline std::vector<std::vector<Vertex>> strongly_connected_components(const DiGraph& g) {
  const std::size_t n = g.vertex_count();
  const auto succ = g.successors();

  // Iterative Tarjan.
  std::vector<std::size_t> index(n, kNoVertex), low(n, 0), comp(n, kNoVertex);
  std::vector<char> on_stack(n, 0);
  std::vector<Vertex> stack;
  std::vector<std::pair<Vertex, std::size_t>> call;
  std::size_t next_index = 0, comp_count = 0;

  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != kNoVertex) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < succ[v].size()) {
        Vertex w = succ[v][pos++];
        if (index[w] == kNoVertex) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comp_count;
        } while (w != v);
        ++comp_count;
      }
      Vertex finished = v;
      call.pop_back();
      if (!call.empty()) {
        Vertex parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }

  std::vector<std::vector<Vertex>> members(comp_count);
  for (Vertex v = 0; v < n; ++v) members[comp[v]].push_back(v);

  std::vector<std::vector<std::size_t>> dag(comp_count);
  std::vector<std::size_t> indegree(comp_count, 0);
  for (const auto& arc : g.edges()) {
    std::size_t a = comp[arc.from], b = comp[arc.to];
    if (a != b) dag[a].push_back(b);
  }
  for (auto& out : dag) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (std::size_t b : out) ++indegree[b];
  }

  // Kahn's algorithm keyed by smallest member.
  using Key = std::pair<Vertex, std::size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  for (std::size_t c = 0; c < comp_count; ++c) {
    if (indegree[c] == 0) ready.push({members[c].front(), c});
  }
  std::vector<std::vector<Vertex>> out;
  out.reserve(comp_count);
  while (!ready.empty()) {
    std::size_t c = ready.top().second;
    ready.pop();
    out.push_back(members[c]);
    for (std::size_t b : dag[c]) {
      if (--indegree[b] == 0) ready.push({members[b].front(), b});
    }
  }
  return out;
}

/// Component index of each vertex for a component list.
inline std::vector<std::size_t> component_index(const std::vector<std::vector<Vertex>>& components,
                                                std::size_t vertex_count) {
  std::vector<std::size_t> out(vertex_count, kNoVertex);
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (Vertex v : components[c]) out[v] = c;
  }
  return out;
}

}  // namespace ctopo::graphs

#endif  // CTOPO_GRAPHS_SCC_HPP
