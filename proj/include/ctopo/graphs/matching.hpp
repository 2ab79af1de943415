#ifndef CTOPO_GRAPHS_MATCHING_HPP
#define CTOPO_GRAPHS_MATCHING_HPP

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "ctopo/graphs/digraph.hpp"

namespace ctopo::graphs {

namespace detail {

// Left-indexed CSR view of a bipartite graph; neighbours sorted by right id.
struct LeftAdjacency {
  std::vector<std::size_t> offset;
  std::vector<Vertex> right;
  std::vector<double> weight;

  explicit LeftAdjacency(const BipartiteGraph& b) : offset(b.left_count() + 1, 0) {
    const auto edges = b.edges();
    right.reserve(edges.size());
    weight.reserve(edges.size());
    for (const auto& e : edges) {
      ++offset[e.left + 1];
      right.push_back(e.right);
      weight.push_back(e.weight);
    }
    for (std::size_t l = 0; l < b.left_count(); ++l) offset[l + 1] += offset[l];
  }

  std::size_t begin(Vertex l) const { return offset[l]; }
  std::size_t end(Vertex l) const { return offset[l + 1]; }
};

// Hopcroft-Karp restricted to edges accepted by `allowed(edge_index)`.
// Extends the matching passed in through match_left / match_right.
template <typename Allowed>
void hopcroft_karp(const LeftAdjacency& adj, std::vector<Vertex>& match_left,
                   std::vector<Vertex>& match_right, Allowed allowed) {
  const std::size_t left = match_left.size();
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> layer(left), cursor(left);

  auto bfs = [&]() {
    std::deque<Vertex> queue;
    bool found = false;
    for (Vertex l = 0; l < left; ++l) {
      if (match_left[l] == kNoVertex) {
        layer[l] = 0;
        queue.push_back(l);
      } else {
        layer[l] = kInf;
      }
    }
    while (!queue.empty()) {
      Vertex l = queue.front();
      queue.pop_front();
      for (std::size_t i = adj.begin(l); i < adj.end(l); ++i) {
        if (!allowed(i)) continue;
        Vertex owner = match_right[adj.right[i]];
        if (owner == kNoVertex) {
          found = true;
        } else if (layer[owner] == kInf) {
          layer[owner] = layer[l] + 1;
          queue.push_back(owner);
        }
      }
    }
    return found;
  };

  std::function<bool(Vertex)> dfs = [&](Vertex l) -> bool {
    for (std::size_t& i = cursor[l]; i < adj.end(l); ++i) {
      if (!allowed(i)) continue;
      Vertex r = adj.right[i];
      Vertex owner = match_right[r];
      if (owner == kNoVertex || (layer[owner] == layer[l] + 1 && dfs(owner))) {
        match_left[l] = r;
        match_right[r] = l;
        ++i;
        return true;
      }
    }
    layer[l] = kInf;
    return false;
  };

  while (bfs()) {
    for (Vertex l = 0; l < left; ++l) cursor[l] = adj.begin(l);
    for (Vertex l = 0; l < left; ++l) {
      if (match_left[l] == kNoVertex) dfs(l);
    }
  }
}

inline Matching collect(const LeftAdjacency& adj, const std::vector<Vertex>& match_left) {
  Matching m;
  for (Vertex l = 0; l < match_left.size(); ++l) {
    Vertex r = match_left[l];
    if (r == kNoVertex) continue;
    m.pairs.emplace_back(l, r);
    auto first = adj.right.begin() + static_cast<std::ptrdiff_t>(adj.begin(l));
    auto last = adj.right.begin() + static_cast<std::ptrdiff_t>(adj.end(l));
    auto it = std::lower_bound(first, last, r);
    m.total_weight += adj.weight[static_cast<std::size_t>(it - adj.right.begin())];
  }
  return m;
}

// Dual-feasible state of the assignment problem: u[l] + v[r] <= w(l, r) on
// every edge, equality on matched edges, v[r] <= 0 and v[r] == 0 whenever r is
// unmatched.
struct AssignmentState {
  const LeftAdjacency& adj;
  std::vector<Vertex> match_left;
  std::vector<Vertex> match_right;
  std::vector<double> u;
  std::vector<double> v;
  double eps;

  double reduced(Vertex l, std::size_t i) const { return adj.weight[i] - u[l] - v[adj.right[i]]; }
  bool tight(Vertex l, std::size_t i) const { return std::abs(reduced(l, i)) <= eps; }
  bool must_cover(Vertex r) const { return v[r] < -eps; }

  // Shortest augmenting path from the free left vertex `root` (Dijkstra over
  // reduced costs), followed by the usual Hungarian potential update.
  bool augment(Vertex root) {
    const std::size_t right = match_right.size();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(right, kInf);
    std::vector<Vertex> from_row(right, kNoVertex);
    std::vector<char> done(right, 0);
    std::vector<Vertex> finalized;
    using Item = std::pair<double, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

    auto relax = [&](Vertex row, double base) {
      for (std::size_t i = adj.begin(row); i < adj.end(row); ++i) {
        Vertex r = adj.right[i];
        if (done[r]) continue;
        double nd = base + std::max(0.0, reduced(row, i));
        if (nd < dist[r]) {
          dist[r] = nd;
          from_row[r] = row;
          heap.push({nd, r});
        }
      }
    };

    relax(root, 0.0);
    Vertex target = kNoVertex;
    while (!heap.empty()) {
      auto [d, r] = heap.top();
      heap.pop();
      if (done[r] || d > dist[r]) continue;
      done[r] = 1;
      if (match_right[r] == kNoVertex) {
        target = r;
        break;
      }
      finalized.push_back(r);
      relax(match_right[r], d);
    }
    if (target == kNoVertex) return false;

    const double total = dist[target];
    u[root] += total;
    for (Vertex r : finalized) {
      double delta = total - dist[r];
      u[match_right[r]] += delta;
      v[r] -= delta;
    }
    Vertex r = target;
    for (;;) {
      Vertex row = from_row[r];
      Vertex next = match_left[row];
      match_left[row] = r;
      match_right[r] = row;
      if (row == root) break;
      r = next;
    }
    return true;
  }

  // Among all optimal left-saturating matchings pick the one whose right
  // partners, read in left order, are lexicographically smallest. Optimal
  // matchings are exactly the left-saturating matchings on tight edges that
  // cover every column with v < 0. Free columns are modelled as owned by
  // interchangeable dummy rows collapsed into one pool node, so every
  // exchange is an alternating cycle.
  void lexicographic_refine() {
    const std::size_t left = match_left.size();
    const std::size_t right = match_right.size();
    const Vertex pool = left;
    std::vector<char> visited(left + 1, 0);
    std::vector<Vertex> parent_node(left + 1, kNoVertex), parent_col(left + 1, kNoVertex);
    std::vector<std::size_t> cursor(left + 1, 0);

    auto take = [&](Vertex node, Vertex col) {
      if (node == pool) {
        match_right[col] = kNoVertex;
      } else {
        match_left[node] = col;
        match_right[col] = node;
      }
    };

    for (Vertex l = 0; l < left; ++l) {
      const Vertex current = match_left[l];
      bool any = false;
      for (std::size_t i = adj.begin(l); i < adj.end(l) && adj.right[i] < current; ++i) {
        if (tight(l, i)) {
          any = true;
          break;
        }
      }
      if (!any) continue;

      std::fill(visited.begin(), visited.end(), 0);
      for (Vertex k = 0; k <= l; ++k) visited[k] = 1;
      const bool can_free_current = !must_cover(current);

      for (std::size_t i = adj.begin(l); i < adj.end(l) && adj.right[i] < current; ++i) {
        if (!tight(l, i)) continue;
        const Vertex candidate = adj.right[i];
        const Vertex start = match_right[candidate] == kNoVertex ? pool : match_right[candidate];
        if (visited[start]) continue;

        // Depth-first search for a node that can take `current`.
        Vertex found = kNoVertex;
        std::vector<Vertex> stack{start};
        visited[start] = 1;
        cursor[start] = start == pool ? 0 : adj.begin(start);
        while (!stack.empty() && found == kNoVertex) {
          Vertex node = stack.back();
          Vertex child = kNoVertex, via = kNoVertex;
          if (node == pool) {
            if (can_free_current) {
              found = node;
              break;
            }
            for (std::size_t& c = cursor[pool]; c < right; ++c) {
              Vertex owner = match_right[c];
              if (owner != kNoVertex && !must_cover(c) && !visited[owner]) {
                child = owner;
                via = c++;
                break;
              }
            }
          } else {
            for (std::size_t& e = cursor[node]; e < adj.end(node); ++e) {
              if (!tight(node, e)) continue;
              Vertex col = adj.right[e];
              if (col == current) {
                found = node;
                break;
              }
              Vertex owner = match_right[col] == kNoVertex ? pool : match_right[col];
              if (!visited[owner]) {
                child = owner;
                via = col;
                ++e;
                break;
              }
            }
            if (found != kNoVertex) break;
          }
          if (child == kNoVertex) {
            stack.pop_back();
            continue;
          }
          visited[child] = 1;
          parent_node[child] = node;
          parent_col[child] = via;
          cursor[child] = child == pool ? 0 : adj.begin(child);
          stack.push_back(child);
        }
        if (found == kNoVertex) continue;

        take(found, current);
        for (Vertex node = found; node != start; node = parent_node[node]) {
          take(parent_node[node], parent_col[node]);
        }
        take(l, candidate);
        break;
      }
    }
  }
};

}  // namespace detail

/// Maximum-cardinality matching (Hopcroft-Karp). Deterministic for a fixed graph.
inline Matching max_bipartite_matching(const BipartiteGraph& b) {
  detail::LeftAdjacency adj(b);
  std::vector<Vertex> match_left(b.left_count(), kNoVertex);
  std::vector<Vertex> match_right(b.right_count(), kNoVertex);
  detail::hopcroft_karp(adj, match_left, match_right, [](std::size_t) { return true; });
  return detail::collect(adj, match_left);
}

/// Minimum-weight matching saturating every left vertex. Among optima the
/// matching with the lexicographically smallest (left, right) pair list is
/// returned. Throws NoPerfectMatching when no left-saturating matching exists.
inline Matching min_weight_perfect_matching(const BipartiteGraph& b) {
  if (b.left_count() > b.right_count()) {
    throw NoPerfectMatching(b.right_count());
  }
  detail::LeftAdjacency adj(b);
  double max_weight = 0.0;
  for (double w : adj.weight) max_weight = std::max(max_weight, w);

  detail::AssignmentState state{adj,
                                std::vector<Vertex>(b.left_count(), kNoVertex),
                                std::vector<Vertex>(b.right_count(), kNoVertex),
                                std::vector<double>(b.left_count(), 0.0),
                                std::vector<double>(b.right_count(), 0.0),
                                1e-9 * std::max(1.0, max_weight)};

  // Zero-weight edges are tight under zero potentials, so a maximum matching
  // on them is a valid warm start.
  detail::hopcroft_karp(adj, state.match_left, state.match_right,
                        [&](std::size_t i) { return adj.weight[i] == 0.0; });
  for (Vertex l = 0; l < b.left_count(); ++l) {
    if (state.match_left[l] == kNoVertex && !state.augment(l)) throw NoPerfectMatching(l);
  }
  state.lexicographic_refine();
  return detail::collect(adj, state.match_left);
}

}  // namespace ctopo::graphs

#endif  // CTOPO_GRAPHS_MATCHING_HPP
