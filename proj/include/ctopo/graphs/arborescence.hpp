#ifndef CTOPO_GRAPHS_ARBORESCENCE_HPP
#define CTOPO_GRAPHS_ARBORESCENCE_HPP

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <vector>

#include "ctopo/graphs/digraph.hpp"
#include "ctopo/graphs/scc.hpp"

namespace ctopo::graphs {

namespace detail {

class RollbackUnionFind {
 public:
  explicit RollbackUnionFind(std::size_t n) : link_(n, -1) {}

  std::size_t find(std::size_t x) const {
    while (link_[x] >= 0) x = static_cast<std::size_t>(link_[x]);
    return x;
  }

  std::size_t time() const { return history_.size(); }

  void rollback(std::size_t t) {
    while (history_.size() > t) {
      auto [index, value] = history_.back();
      history_.pop_back();
      link_[index] = value;
    }
  }

  bool join(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (link_[a] > link_[b]) std::swap(a, b);
    history_.push_back({a, link_[a]});
    history_.push_back({b, link_[b]});
    link_[a] += link_[b];
    link_[b] = static_cast<long>(a);
    return true;
  }

 private:
  std::vector<long> link_;
  std::vector<std::pair<std::size_t, long>> history_;
};

// Skew heap of arcs keyed by weight with lazy additive offsets.
class ArcHeap {
 public:
  explicit ArcHeap(std::size_t capacity) { nodes_.reserve(capacity); }

  int make(const WeightedArc& arc, std::size_t tag) {
    nodes_.push_back({arc, -1, -1, 0.0, tag});
    return static_cast<int>(nodes_.size() - 1);
  }

  int merge(int a, int b) {
    if (a < 0) return b;
    if (b < 0) return a;
    push_down(a);
    push_down(b);
    if (less(nodes_[b].arc, nodes_[a].arc)) std::swap(a, b);
    int merged = merge(b, nodes_[a].right);
    nodes_[a].right = nodes_[a].left;
    nodes_[a].left = merged;
    return a;
  }

  WeightedArc top(int a) {
    push_down(a);
    return nodes_[a].arc;
  }

  void add(int a, double delta) { nodes_[a].delta += delta; }

  int pop(int a) {
    push_down(a);
    return merge(nodes_[a].left, nodes_[a].right);
  }

  // Visits (tag, current weight) of every arc still in heap `a`.
  template <typename Visit>
  void for_each(int a, Visit visit) {
    std::vector<int> stack;
    if (a >= 0) stack.push_back(a);
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      push_down(x);
      visit(nodes_[x].tag, nodes_[x].arc.weight);
      if (nodes_[x].left >= 0) stack.push_back(nodes_[x].left);
      if (nodes_[x].right >= 0) stack.push_back(nodes_[x].right);
    }
  }

 private:
  struct Node {
    WeightedArc arc;
    int left;
    int right;
    double delta;
    std::size_t tag;
  };

  static bool less(const WeightedArc& x, const WeightedArc& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    if (x.from != y.from) return x.from < y.from;
    return x.to < y.to;
  }

  void push_down(int a) {
    Node& n = nodes_[a];
    if (n.delta == 0.0) return;
    n.arc.weight += n.delta;
    if (n.left >= 0) nodes_[n.left].delta += n.delta;
    if (n.right >= 0) nodes_[n.right].delta += n.delta;
    n.delta = 0.0;
  }

  std::vector<Node> nodes_;
};

struct DirectedTree {
  double cost = 0.0;
  std::vector<Vertex> parent;
  // Lower bound on each input arc's reduced cost under the final dual
  // solution. An arc with positive slack lies in no optimal arborescence.
  std::vector<double> slack;
};

// Minimum arborescence by contraction with mergeable heaps and a rollback
// union-find for tree reconstruction, O(E log E). Returns nullopt when some
// vertex has no path from the root.
inline std::optional<DirectedTree> contract_arborescence(std::size_t n, Vertex root,
                                                         const std::vector<WeightedArc>& arcs) {
  RollbackUnionFind uf(n);
  ArcHeap heaps(arcs.size());
  std::vector<int> heap(n, -1);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto& a = arcs[i];
    if (a.to == root || a.from == a.to) continue;
    heap[a.to] = heaps.merge(heap[a.to], heaps.make(a, i));
  }

  struct Cycle {
    std::size_t rep;
    std::size_t time;
    std::vector<WeightedArc> arcs;
  };
  constexpr long kUnseen = -1;
  std::vector<long> seen(n, kUnseen);
  std::vector<std::size_t> path(n);
  std::vector<WeightedArc> queue(n), in(n, WeightedArc{kNoVertex, kNoVertex, 0.0});
  std::deque<Cycle> cycles;
  double cost = 0.0;
  seen[root] = static_cast<long>(root);

  for (std::size_t s = 0; s < n; ++s) {
    std::size_t u = s, depth = 0;
    while (seen[u] == kUnseen) {
      if (heap[u] < 0) return std::nullopt;
      WeightedArc e = heaps.top(heap[u]);
      heaps.add(heap[u], -e.weight);
      heap[u] = heaps.pop(heap[u]);
      queue[depth] = e;
      path[depth++] = u;
      seen[u] = static_cast<long>(s);
      cost += e.weight;
      u = uf.find(e.from);
      if (seen[u] == static_cast<long>(s)) {
        int merged = -1;
        const std::size_t end = depth, time = uf.time();
        std::size_t w;
        do {
          w = path[--depth];
          merged = heaps.merge(merged, heap[w]);
        } while (uf.join(u, w));
        u = uf.find(u);
        heap[u] = merged;
        seen[u] = kUnseen;
        cycles.push_front({u, time, {queue.begin() + static_cast<std::ptrdiff_t>(depth),
                                     queue.begin() + static_cast<std::ptrdiff_t>(end)}});
      }
    }
    for (std::size_t i = 0; i < depth; ++i) in[uf.find(queue[i].to)] = queue[i];
  }

  std::vector<double> slack(arcs.size(), 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    if (uf.find(v) == v) heaps.for_each(heap[v], [&](std::size_t tag, double w) { slack[tag] = w; });
  }

  for (const auto& cycle : cycles) {
    uf.rollback(cycle.time);
    WeightedArc entering = in[cycle.rep];
    for (const auto& e : cycle.arcs) in[uf.find(e.to)] = e;
    in[uf.find(entering.to)] = entering;
  }

  DirectedTree tree;
  tree.cost = cost;
  tree.slack = std::move(slack);
  tree.parent.resize(n);
  for (std::size_t v = 0; v < n; ++v) tree.parent[v] = v == root ? kNoVertex : in[v].from;
  return tree;
}

}  // namespace detail

/// Minimum-weight spanning arborescence rooted at `root`. Among optima the
/// tree with the lexicographically smallest parent vector (equivalently the
/// smallest edge list ordered by child) is returned. Throws NotSpannable when
/// some vertex is unreachable from the root.
inline Arborescence min_spanning_arborescence(const DiGraph& g, Vertex root) {
  const std::size_t n = g.vertex_count();
  if (root >= n) throw InvalidArgument("arborescence root out of range");

  {
    const auto reach = reachable_from(g, {root});
    if (reach.size() != n) {
      for (Vertex v = 0, i = 0; v < n; ++v, ++i) {
        if (i >= reach.size() || reach[i] != v) throw NotSpannable(v);
      }
    }
  }

  std::vector<WeightedArc> arcs;
  for (const auto& a : g.edges()) {
    if (a.to != root && a.from != a.to) arcs.push_back(a);
  }
  std::vector<std::vector<std::size_t>> incoming(n);
  for (std::size_t i = 0; i < arcs.size(); ++i) incoming[arcs[i].to].push_back(i);  // sorted by tail

  auto best = detail::contract_arborescence(n, root, arcs);
  if (!best) throw NotSpannable(root);
  const double optimum = best->cost;
  const double eps = 1e-9 * std::max(1.0, std::abs(optimum));
  const std::vector<double> slack = best->slack;
  std::vector<Vertex> parent = best->parent;
  std::vector<double> in_weight(n, 0.0);
  auto refresh_weights = [&] {
    for (Vertex x = 0; x < n; ++x) {
      for (std::size_t i : incoming[x]) {
        if (arcs[i].from == parent[x]) in_weight[x] = arcs[i].weight;
      }
    }
  };
  refresh_weights();

  auto is_descendant = [&](Vertex x, Vertex ancestor) {
    for (Vertex cur = x; cur != kNoVertex; cur = parent[cur]) {
      if (cur == ancestor) return true;
    }
    return false;
  };

  // Greedy lexicographic fix-up: settle parents in vertex order, keeping the
  // smallest parent that still admits an optimal completion.
  std::vector<Vertex> fixed(n, kNoVertex);
  for (Vertex v = 0; v < n; ++v) {
    if (v == root) continue;
    for (std::size_t ci : incoming[v]) {
      const WeightedArc& cand = arcs[ci];
      if (cand.from >= parent[v]) break;
      if (slack[ci] > eps) continue;
      if (cand.weight <= in_weight[v] + eps && !is_descendant(cand.from, v)) {
        parent[v] = cand.from;
        in_weight[v] = cand.weight;
        break;
      }
      std::vector<WeightedArc> restricted;
      restricted.reserve(arcs.size());
      for (const auto& a : arcs) {
        Vertex want = a.to == v ? cand.from : fixed[a.to];
        if (want == kNoVertex || want == a.from) restricted.push_back(a);
      }
      auto trial = detail::contract_arborescence(n, root, restricted);
      if (trial && trial->cost <= optimum + eps) {
        parent = trial->parent;
        refresh_weights();
        break;
      }
    }
    fixed[v] = parent[v];
  }

  Arborescence out;
  out.root = root;
  for (Vertex v = 0; v < n; ++v) {
    if (v == root) continue;
    out.tree_edges.emplace_back(parent[v], v);
    out.total_weight += in_weight[v];
  }
  return out;
}

}  // namespace ctopo::graphs

#endif  // CTOPO_GRAPHS_ARBORESCENCE_HPP
