#ifndef CTOPO_GENERATORS_HPP
#define CTOPO_GENERATORS_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ctopo/errors.hpp"
#include "ctopo/graphs.hpp"
#include "ctopo/system_model.hpp"

namespace ctopo {

/// Simple undirected graph on vertices 0..vertex_count-1.
struct UndirectedGraph {
  std::size_t vertex_count = 0;
  std::set<std::pair<std::size_t, std::size_t>> edges;  // stored with first < second

  void add_edge(std::size_t a, std::size_t b) {
    if (a >= vertex_count || b >= vertex_count) throw InvalidArgument("graph edge out of range");
    if (a == b) throw InvalidArgument("graph self-loops are not allowed");
    edges.insert(std::minmax(a, b));
  }

  bool connected() const {
    if (vertex_count == 0) return false;
    graphs::DiGraph g(vertex_count);
    for (const auto& [a, b] : edges) {
      g.add_edge(a, b);
      g.add_edge(b, a);
    }
    return graphs::reachable_from(g, {graphs::Vertex{0}}).size() == vertex_count;
  }

  static UndirectedGraph path(std::size_t r) {
    UndirectedGraph g{r, {}};
    for (std::size_t v = 0; v + 1 < r; ++v) g.add_edge(v, v + 1);
    return g;
  }

  static UndirectedGraph cycle(std::size_t r) {
    UndirectedGraph g = path(r);
    if (r >= 3) g.add_edge(r - 1, 0);
    return g;
  }

  static UndirectedGraph complete(std::size_t r) {
    UndirectedGraph g{r, {}};
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = a + 1; b < r; ++b) g.add_edge(a, b);
    }
    return g;
  }

  /// K_{1,leaves} with centre 0.
  static UndirectedGraph star(std::size_t leaves) {
    UndirectedGraph g{leaves + 1, {}};
    for (std::size_t v = 1; v <= leaves; ++v) g.add_edge(0, v);
    return g;
  }
};

/// Hardness-reduction instance: one 3-state subsystem per vertex with A =
/// [[0,*,0],[*,0,*],[0,*,0]]; only `leader` has an input, on its first state.
/// Every graph edge permits interconnections in both directions.
inline CompositeInstance gen_reduction(const UndirectedGraph& g, std::size_t leader) {
  if (leader >= g.vertex_count) throw InvalidArgument("leader vertex out of range");
  if (!g.connected()) throw InvalidArgument("reduction graph must be connected");
  const auto a = SparsityPattern::from_rows(3, {"0*0", "*0*", "0*0"});
  CompositeInstance inst;
  for (std::size_t v = 0; v < g.vertex_count; ++v) {
    inst.subsystems.push_back({a, v == leader ? SparsityPattern(3, 1, {{0, 0}}) : SparsityPattern(3, 0)});
  }
  inst.neighbors.assign(g.vertex_count, {});
  for (const auto& [x, y] : g.edges) {
    inst.neighbors[x].insert(y);
    inst.neighbors[y].insert(x);
  }
  return inst;
}

struct RandomInstanceOptions {
  std::size_t subsystems = 4;
  std::size_t min_states = 1;
  std::size_t max_states = 3;
  std::size_t min_inputs = 0;
  std::size_t max_inputs = 1;
  double neighbor_density = 0.5;  // probability of each ordered neighbour pair
  double pattern_density = 0.3;   // probability of each A / B entry
  std::uint64_t seed = 0;
};

namespace detail {

// Platform-independent draws on top of mt19937_64, whose output sequence is
// fixed by the standard (the std distributions are not).
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  std::size_t between(std::size_t lo, std::size_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::size_t>(engine_());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::size_t>(x % span);
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Reproducible random instance. At least one subsystem has an input and every
/// input column drives at least one state.
inline CompositeInstance gen_random(const RandomInstanceOptions& o) {
  if (o.subsystems == 0 || o.min_states == 0 || o.min_states > o.max_states || o.min_inputs > o.max_inputs) {
    throw InvalidArgument("invalid random instance ranges");
  }
  if (!(o.neighbor_density >= 0.0 && o.neighbor_density <= 1.0) ||
      !(o.pattern_density >= 0.0 && o.pattern_density <= 1.0)) {
    throw InvalidArgument("densities must lie in [0, 1]");
  }
  detail::PortableRng rng(o.seed);
  CompositeInstance inst;
  std::size_t input_total = 0;
  for (std::size_t i = 0; i < o.subsystems; ++i) {
    const std::size_t n = rng.between(o.min_states, o.max_states);
    std::size_t m = rng.between(o.min_inputs, o.max_inputs);
    if (i + 1 == o.subsystems && input_total == 0 && m == 0) m = 1;
    input_total += m;
    std::vector<SparsityPattern::Entry> a, b;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (rng.chance(o.pattern_density)) a.emplace_back(r, c);
      }
    }
    for (std::size_t c = 0; c < m; ++c) {
      bool any = false;
      for (std::size_t r = 0; r < n; ++r) {
        if (rng.chance(o.pattern_density)) {
          b.emplace_back(r, c);
          any = true;
        }
      }
      if (!any) b.emplace_back(rng.between(0, n - 1), c);
    }
    inst.subsystems.push_back({SparsityPattern(n, n, std::move(a)), SparsityPattern(n, m, std::move(b))});
  }
  inst.neighbors.assign(o.subsystems, {});
  for (std::size_t i = 0; i < o.subsystems; ++i) {
    for (std::size_t j = 0; j < o.subsystems; ++j) {
      if (i != j && rng.chance(o.neighbor_density)) inst.neighbors[i].insert(j);
    }
  }
  return inst;
}

/// Adds uniform random integer costs in [lo, hi] for every admissible edge.
inline void assign_random_weights(CompositeInstance& inst, std::uint64_t seed, std::size_t lo = 1,
                                  std::size_t hi = 9) {
  detail::PortableRng rng(seed);
  WeightMap w;
  for (const auto& e : inst.candidate_edges()) w[{e.src, e.dst}] = static_cast<double>(rng.between(lo, hi));
  inst.weights = std::move(w);
}

}  // namespace ctopo

#endif  // CTOPO_GENERATORS_HPP
