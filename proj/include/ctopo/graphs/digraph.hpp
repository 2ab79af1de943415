#ifndef CTOPO_GRAPHS_DIGRAPH_HPP
#define CTOPO_GRAPHS_DIGRAPH_HPP

#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ctopo/errors.hpp"

namespace ctopo::graphs {

using Vertex = std::size_t;

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

struct WeightedArc {
  Vertex from = 0;
  Vertex to = 0;
  double weight = 0.0;

  friend bool operator==(const WeightedArc&, const WeightedArc&) = default;
};

namespace detail {

inline void check_weight(double weight) {
  if (!std::isfinite(weight) || weight < 0.0) {
    throw InvalidArgument("edge weights must be finite and non-negative, got " +
                          std::to_string(weight));
  }
}

}  // namespace detail

/// Directed graph on vertices 0..vertex_count-1 with optional non-negative
/// arc weights. Parallel arcs collapse to one arc carrying the minimum weight.
class DiGraph {
 public:
  DiGraph() = default;
  explicit DiGraph(std::size_t vertex_count) : vertex_count_(vertex_count) {}

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return arcs_.size(); }

  void add_edge(Vertex from, Vertex to, double weight = 0.0) {
    if (from >= vertex_count_ || to >= vertex_count_) {
      throw InvalidArgument("arc (" + std::to_string(from) + ", " + std::to_string(to) +
                            ") out of range for " + std::to_string(vertex_count_) +
                            " vertices");
    }
    detail::check_weight(weight);
    auto [it, inserted] = arcs_.try_emplace({from, to}, weight);
    if (!inserted && weight < it->second) it->second = weight;
  }

  bool has_edge(Vertex from, Vertex to) const { return arcs_.contains({from, to}); }

  double weight(Vertex from, Vertex to) const {
    auto it = arcs_.find({from, to});
    if (it == arcs_.end()) throw InvalidArgument("no such arc");
    return it->second;
  }

  /// Arcs in lexicographic (from, to) order.
  std::vector<WeightedArc> edges() const {
    std::vector<WeightedArc> out;
    out.reserve(arcs_.size());
    for (const auto& [key, w] : arcs_) out.push_back({key.first, key.second, w});
    return out;
  }

  /// Sorted successor lists.
  std::vector<std::vector<Vertex>> successors() const {
    std::vector<std::vector<Vertex>> out(vertex_count_);
    for (const auto& [key, w] : arcs_) out[key.first].push_back(key.second);
    return out;
  }

  friend bool operator==(const DiGraph&, const DiGraph&) = default;

 private:
  std::size_t vertex_count_ = 0;
  std::map<std::pair<Vertex, Vertex>, double> arcs_;
};

struct BipartiteEdge {
  Vertex left = 0;
  Vertex right = 0;
  double weight = 0.0;

  friend bool operator==(const BipartiteEdge&, const BipartiteEdge&) = default;
};

/// Bipartite graph with left part 0..left_count-1 and right part 0..right_count-1.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(std::size_t left_count, std::size_t right_count)
      : left_count_(left_count), right_count_(right_count) {}

  std::size_t left_count() const noexcept { return left_count_; }
  std::size_t right_count() const noexcept { return right_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  void add_edge(Vertex left, Vertex right, double weight = 0.0) {
    if (left >= left_count_ || right >= right_count_) {
      throw InvalidArgument("bipartite edge (" + std::to_string(left) + ", " +
                            std::to_string(right) + ") out of range");
    }
    detail::check_weight(weight);
    auto [it, inserted] = edges_.try_emplace({left, right}, weight);
    if (!inserted && weight < it->second) it->second = weight;
  }

  bool has_edge(Vertex left, Vertex right) const { return edges_.contains({left, right}); }

  double weight(Vertex left, Vertex right) const {
    auto it = edges_.find({left, right});
    if (it == edges_.end()) throw InvalidArgument("no such bipartite edge");
    return it->second;
  }

  /// Edges in lexicographic (left, right) order.
  std::vector<BipartiteEdge> edges() const {
    std::vector<BipartiteEdge> out;
    out.reserve(edges_.size());
    for (const auto& [key, w] : edges_) out.push_back({key.first, key.second, w});
    return out;
  }

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  std::size_t left_count_ = 0;
  std::size_t right_count_ = 0;
  std::map<std::pair<Vertex, Vertex>, double> edges_;
};

/// A set of (left, right) pairs, sorted by left vertex, no vertex repeated.
struct Matching {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  double total_weight = 0.0;

  std::size_t size() const noexcept { return pairs.size(); }

  friend bool operator==(const Matching&, const Matching&) = default;
};

/// Spanning arborescence. `tree_edges` holds (parent, child) sorted by child,
/// so lexicographic comparison of two lists compares their parent vectors.
struct Arborescence {
  Vertex root = 0;
  std::vector<std::pair<Vertex, Vertex>> tree_edges;
  double total_weight = 0.0;

  /// Parent per vertex; kNoVertex for the root.
  std::vector<Vertex> parents(std::size_t vertex_count) const {
    std::vector<Vertex> out(vertex_count, kNoVertex);
    for (const auto& [p, c] : tree_edges) out[c] = p;
    return out;
  }

  friend bool operator==(const Arborescence&, const Arborescence&) = default;
};

}  // namespace ctopo::graphs

#endif  // CTOPO_GRAPHS_DIGRAPH_HPP
