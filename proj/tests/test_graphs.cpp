#include <gtest/gtest.h>

#include <random>

#include "ctopo/graphs.hpp"
#include "support/brute_force.hpp"

namespace {

using namespace ctopo::graphs;

BipartiteGraph from_table(const brute::WeightTable& t, std::size_t right) {
  BipartiteGraph b(t.size(), right);
  for (std::size_t l = 0; l < t.size(); ++l) {
    for (std::size_t r = 0; r < right; ++r) {
      if (t[l][r] >= 0) b.add_edge(l, r, t[l][r]);
    }
  }
  return b;
}

DiGraph digraph_from_table(const brute::WeightTable& t) {
  DiGraph g(t.size());
  for (std::size_t u = 0; u < t.size(); ++u) {
    for (std::size_t v = 0; v < t.size(); ++v) {
      if (t[u][v] >= 0) g.add_edge(u, v, t[u][v]);
    }
  }
  return g;
}

TEST(Scc, SingletonAndCycle) {
  EXPECT_EQ(strongly_connected_components(DiGraph(1)), (std::vector<std::vector<Vertex>>{{0}}));

  DiGraph cycle(3);
  cycle.add_edge(0, 1);
  cycle.add_edge(1, 2);
  cycle.add_edge(2, 0);
  EXPECT_EQ(strongly_connected_components(cycle), (std::vector<std::vector<Vertex>>{{0, 1, 2}}));
}

TEST(Scc, BranchingSubsystemWithSelfLoopHasThreeComponents) {
  // x1 -> x2, x1 -> x3, self-loop on x3.
  DiGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(2, 2);
  EXPECT_EQ(strongly_connected_components(g), (std::vector<std::vector<Vertex>>{{0}, {1}, {2}}));
}

TEST(Scc, TopologicalOrderSourcesFirst) {
  DiGraph g(4);
  g.add_edge(3, 2);
  g.add_edge(2, 1);
  g.add_edge(1, 2);
  g.add_edge(1, 0);
  EXPECT_EQ(strongly_connected_components(g),
            (std::vector<std::vector<Vertex>>{{3}, {1, 2}, {0}}));
}

TEST(Scc, RandomGraphsPartitionIntoMutuallyReachableClassesWithAcyclicCondensation) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 9;
    auto table = brute::random_table(rng, n, n, 0.25, 0);
    DiGraph g = digraph_from_table(table);
    auto comps = strongly_connected_components(g);
    auto index = component_index(comps, n);

    for (Vertex a = 0; a < n; ++a) {
      auto ra = reachable_from(g, {a});
      for (Vertex b = 0; b < n; ++b) {
        auto rb = reachable_from(g, {b});
        bool mutual = std::binary_search(ra.begin(), ra.end(), b) &&
                      std::binary_search(rb.begin(), rb.end(), a);
        EXPECT_EQ(mutual, index[a] == index[b]);
      }
    }
    // Every arc between components goes forward in the list: acyclic condensation.
    for (const auto& arc : g.edges()) EXPECT_LE(index[arc.from], index[arc.to]);
    EXPECT_EQ(strongly_connected_components(g), comps);
  }
}

TEST(Reachability, Basics) {
  DiGraph chain(3);
  chain.add_edge(0, 1);
  chain.add_edge(1, 2);
  EXPECT_EQ(reachable_from(chain, {0}), (std::vector<Vertex>{0, 1, 2}));
  EXPECT_EQ(reachable_from(chain, {2}), (std::vector<Vertex>{2}));
  EXPECT_EQ(reachable_from(chain, {0, 1, 2}), (std::vector<Vertex>{0, 1, 2}));
  EXPECT_THROW(reachable_from(chain, {3}), ctopo::InvalidArgument);
}

TEST(Graphs, ParallelArcsKeepMinimumAndNegativeWeightsAreRejected) {
  DiGraph g(2);
  g.add_edge(0, 1, 3.0);
  g.add_edge(0, 1, 1.0);
  g.add_edge(0, 1, 2.0);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_DOUBLE_EQ(g.weight(0, 1), 1.0);
  EXPECT_THROW(g.add_edge(0, 1, -1.0), ctopo::InvalidArgument);
  EXPECT_THROW(g.add_edge(0, 2), ctopo::InvalidArgument);

  BipartiteGraph b(1, 1);
  EXPECT_THROW(b.add_edge(0, 0, std::numeric_limits<double>::infinity()), ctopo::InvalidArgument);
  EXPECT_THROW(b.add_edge(1, 0), ctopo::InvalidArgument);
}

TEST(MaxMatching, Examples) {
  EXPECT_EQ(max_bipartite_matching(BipartiteGraph(3, 3)).size(), 0u);

  // Row/column structure of [[0,*,0],[*,0,*],[0,*,0]]: one dilation.
  BipartiteGraph a(3, 3);
  a.add_edge(0, 1);
  a.add_edge(1, 0);
  a.add_edge(1, 2);
  a.add_edge(2, 1);
  EXPECT_EQ(max_bipartite_matching(a).size(), 2u);

  BipartiteGraph full(3, 3);
  for (Vertex l = 0; l < 3; ++l)
    for (Vertex r = 0; r < 3; ++r) full.add_edge(l, r);
  EXPECT_EQ(max_bipartite_matching(full).size(), 3u);
}

TEST(MaxMatching, AgreesWithExhaustiveSearch) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t left = rng() % 7, right = rng() % 7;
    auto table = brute::random_table(rng, left, right, 0.35, 0);
    auto b = from_table(table, right);
    Matching m = max_bipartite_matching(b);
    EXPECT_EQ(m.size(), brute::max_matching_size(table, right));
    std::vector<char> used_r(right, 0);
    for (auto [l, r] : m.pairs) {
      EXPECT_TRUE(b.has_edge(l, r));
      EXPECT_FALSE(used_r[r]);
      used_r[r] = 1;
    }
    EXPECT_EQ(max_bipartite_matching(b), m);
  }
}

TEST(MinWeightMatching, Examples) {
  BipartiteGraph one(1, 1);
  one.add_edge(0, 0, 0.0);
  Matching m1 = min_weight_perfect_matching(one);
  EXPECT_EQ(m1.pairs, (std::vector<std::pair<Vertex, Vertex>>{{0, 0}}));
  EXPECT_EQ(m1.total_weight, 0.0);

  // Two perfect matchings: diagonal (1 + 1) and anti-diagonal (2 + 2).
  BipartiteGraph two(2, 2);
  two.add_edge(0, 0, 1);
  two.add_edge(0, 1, 2);
  two.add_edge(1, 0, 2);
  two.add_edge(1, 1, 1);
  Matching m2 = min_weight_perfect_matching(two);
  EXPECT_EQ(m2.pairs, (std::vector<std::pair<Vertex, Vertex>>{{0, 0}, {1, 1}}));
  EXPECT_EQ(m2.total_weight, 2.0);
}

TEST(MinWeightMatching, LexicographicTieBreak) {
  // All four perfect matchings of K_{2,2} plus a spare column weigh the same.
  BipartiteGraph b(2, 3);
  for (Vertex l = 0; l < 2; ++l)
    for (Vertex r = 0; r < 3; ++r) b.add_edge(l, r, 1.0);
  EXPECT_EQ(min_weight_perfect_matching(b).pairs,
            (std::vector<std::pair<Vertex, Vertex>>{{0, 0}, {1, 1}}));
}

TEST(MinWeightMatching, ErrorsWhenLeftCannotBeSaturated) {
  BipartiteGraph b(2, 2);
  b.add_edge(0, 0);
  b.add_edge(1, 0);
  EXPECT_THROW(min_weight_perfect_matching(b), ctopo::NoPerfectMatching);
  EXPECT_THROW(min_weight_perfect_matching(BipartiteGraph(3, 2)), ctopo::NoPerfectMatching);
}

TEST(MinWeightMatching, AgreesWithExhaustiveSearchIncludingTieBreak) {
  std::mt19937_64 rng(17);
  int solved = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const std::size_t left = 1 + rng() % 6;
    const std::size_t right = left + rng() % 3;
    auto table = brute::random_table(rng, left, right, 0.55, 3);
    auto b = from_table(table, right);
    auto expected = brute::min_perfect_matching(table, right);
    if (!expected) {
      EXPECT_THROW(min_weight_perfect_matching(b), ctopo::NoPerfectMatching);
      continue;
    }
    ++solved;
    Matching m = min_weight_perfect_matching(b);
    EXPECT_DOUBLE_EQ(m.total_weight, expected->weight);
    ASSERT_EQ(m.pairs.size(), left);
    for (std::size_t l = 0; l < left; ++l) {
      EXPECT_EQ(m.pairs[l].first, l);
      EXPECT_EQ(m.pairs[l].second, expected->partner[l]) << "trial " << trial;
    }
  }
  EXPECT_GT(solved, 500);
}

TEST(Arborescence, Examples) {
  DiGraph star(4);
  for (Vertex v = 1; v < 4; ++v) star.add_edge(0, v, 0.0);
  Arborescence a = min_spanning_arborescence(star, 0);
  EXPECT_EQ(a.total_weight, 0.0);
  EXPECT_EQ(a.tree_edges, (std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {0, 2}, {0, 3}}));

  DiGraph cycle(3);
  cycle.add_edge(0, 1, 1);
  cycle.add_edge(1, 2, 1);
  cycle.add_edge(2, 0, 1);
  Arborescence c = min_spanning_arborescence(cycle, 0);
  EXPECT_EQ(c.total_weight, 2.0);
  EXPECT_EQ(c.tree_edges, (std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {1, 2}}));
}

TEST(Arborescence, ErrorsWhenSomeVertexIsUnreachable) {
  DiGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(2, 1);
  try {
    min_spanning_arborescence(g, 0);
    FAIL() << "expected NotSpannable";
  } catch (const ctopo::NotSpannable& e) {
    EXPECT_EQ(e.vertex(), 2u);
  }
}

TEST(Arborescence, ContractionCaseNeedsCycleBreaking) {
  // Cheapest in-arcs of 1 and 2 form a cycle; optimum must enter it once.
  DiGraph g(3);
  g.add_edge(0, 1, 10);
  g.add_edge(0, 2, 12);
  g.add_edge(1, 2, 1);
  g.add_edge(2, 1, 1);
  Arborescence a = min_spanning_arborescence(g, 0);
  EXPECT_EQ(a.total_weight, 11.0);
  EXPECT_EQ(a.tree_edges, (std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {1, 2}}));
}

TEST(Arborescence, AgreesWithExhaustiveSearchIncludingTieBreak) {
  std::mt19937_64 rng(23);
  int solved = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    auto table = brute::random_table(rng, n, n, 0.45, 2);
    for (std::size_t v = 0; v < n; ++v) table[v][v] = -1;
    const std::size_t root = rng() % n;
    DiGraph g = digraph_from_table(table);
    auto expected = brute::min_arborescence(table, root);
    if (!expected) {
      EXPECT_THROW(min_spanning_arborescence(g, root), ctopo::NotSpannable);
      continue;
    }
    ++solved;
    Arborescence a = min_spanning_arborescence(g, root);
    EXPECT_DOUBLE_EQ(a.total_weight, expected->weight) << "trial " << trial;
    auto parents = a.parents(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (v == root) continue;
      EXPECT_EQ(parents[v], expected->parent[v]) << "trial " << trial << " vertex " << v;
    }
    EXPECT_EQ(min_spanning_arborescence(g, root), a);
  }
  EXPECT_GT(solved, 300);
}

}  // namespace
