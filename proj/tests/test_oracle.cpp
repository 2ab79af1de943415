#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ctopo/designer.hpp"
#include "ctopo/generators.hpp"
#include "ctopo/oracle.hpp"
#include "support/instances.hpp"

namespace {

using namespace ctopo;

// Plain subset enumeration over at most 16 candidates, using only the
// library's structural test.
struct Plain {
  double full = INFINITY, matching = INFINITY, access = INFINITY;
};

Plain enumerate(const CompositeInstance& inst, bool weighted) {
  auto cands = inst.candidate_edges();
  Plain best;
  for (std::uint32_t mask = 0; mask < (1u << cands.size()); ++mask) {
    EdgeSet s;
    double cost = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (mask >> i & 1u) {
        s.insert(cands[i]);
        cost += weighted ? inst.cost(cands[i]) : 1.0;
      }
    }
    auto r = check_composite(inst, s);
    if (r.controllable) best.full = std::min(best.full, cost);
    if (r.dilation_free) best.matching = std::min(best.matching, cost);
    if (r.accessible) best.access = std::min(best.access, cost);
  }
  return best;
}

CompositeInstance small_random(std::uint64_t seed) {
  RandomInstanceOptions o;
  o.subsystems = 3;
  o.max_states = 2;
  o.neighbor_density = 0.5;
  o.pattern_density = 0.35;
  o.seed = seed;
  return gen_random(o);
}

TEST(Oracle, AlreadyControllableCostsNothing) {
  CompositeInstance inst;
  inst.subsystems = {{SparsityPattern(1, 1), SparsityPattern(1, 1, {{0, 0}})}};
  inst.neighbors = {{}};
  auto r = exact_min_interconnections(inst);
  EXPECT_EQ(r.optimum_cost, 0.0);
  EXPECT_TRUE(r.optimum_edges.empty());
  EXPECT_EQ(exact_min_for_matching(inst).optimum_cost, 0.0);
  EXPECT_EQ(exact_min_for_accessibility(inst).optimum_cost, 0.0);
}

TEST(Oracle, WorkedExample) {
  auto inst = fixtures::worked_example();
  auto full = exact_min_interconnections(inst);
  EXPECT_TRUE(check_composite(inst, full.optimum_edges).controllable);
  EXPECT_EQ(exact_min_for_matching(inst).optimum_cost, 2.0);
  EXPECT_EQ(exact_min_for_accessibility(inst).optimum_cost, 3.0);
  auto d = design(inst);
  EXPECT_LE(full.optimum_cost, d.union_cost);
  EXPECT_LE(d.union_cost, 2 * full.optimum_cost);
  EXPECT_LE(d.lower_bound, full.optimum_cost);
}

TEST(Oracle, AgreesWithPlainEnumeration) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 400 && checked < 120; ++seed) {
    auto inst = small_random(seed);
    if (inst.candidate_edges().size() > 12) continue;
    bool weighted = seed % 2 == 1;
    if (weighted) assign_random_weights(inst, seed, 1, 4);
    auto plain = enumerate(inst, weighted);
    if (std::isinf(plain.full)) {
      EXPECT_THROW(exact_min_interconnections(inst, {}, weighted), Infeasible);
      continue;
    }
    ++checked;
    auto full = exact_min_interconnections(inst, {}, weighted);
    EXPECT_EQ(full.optimum_cost, plain.full) << "seed " << seed;
    EXPECT_TRUE(check_composite(inst, full.optimum_edges).controllable);
    EXPECT_EQ(exact_min_for_matching(inst, weighted).optimum_cost, plain.matching) << "seed " << seed;
    EXPECT_EQ(exact_min_for_accessibility(inst, weighted).optimum_cost, plain.access) << "seed " << seed;
  }
  EXPECT_GE(checked, 50);
}

TEST(Oracle, WitnessIsLexicographicallyFirst) {
  CompositeInstance inst;
  inst.subsystems = {{SparsityPattern(1, 1), SparsityPattern(1, 1, {{0, 0}})},
                     {SparsityPattern::from_rows(2, {"0*", "*0"}), SparsityPattern(2, 0)}};
  inst.neighbors = {{1}, {}};
  auto r = exact_min_interconnections(inst);
  EXPECT_EQ(r.optimum_edges, (EdgeSet{fixtures::edge(0, 0, 1, 0)}));
}

TEST(Oracle, BudgetDecision) {
  auto inst = gen_reduction(UndirectedGraph::path(3), 0);
  auto no = exact_min_interconnections(inst, 1.0);
  EXPECT_EQ(no.within_budget, false);
  EXPECT_TRUE(std::isinf(no.optimum_cost));
  auto yes = exact_min_interconnections(inst, 2.0);
  EXPECT_EQ(yes.within_budget, true);
  EXPECT_EQ(yes.optimum_cost, 2.0);
  EXPECT_EQ(exact_min_interconnections(inst).optimum_cost, 2.0);
}

TEST(Oracle, Errors) {
  auto inst = fixtures::worked_example();
  OracleOptions tight;
  tight.max_candidates = 10;
  EXPECT_THROW(exact_min_interconnections(inst, {}, false, tight), TooLarge);
  tight = {};
  tight.max_explored = 3;
  EXPECT_THROW(exact_min_interconnections(inst, {}, false, tight), TooLarge);

  CompositeInstance dark;
  dark.subsystems = {{SparsityPattern(1, 1), SparsityPattern(1, 0)}, {SparsityPattern(1, 1), SparsityPattern(1, 0)}};
  dark.neighbors = {{1}, {0}};
  EXPECT_THROW(exact_min_for_accessibility(dark), Infeasible);
}

TEST(Oracle, MonotoneUnderNeighbourEnlargement) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto inst = small_random(seed);
    auto bigger = inst;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        if (i != j) bigger.neighbors[i].insert(j);
      }
    }
    try {
      auto a = exact_min_interconnections(inst).optimum_cost;
      EXPECT_LE(exact_min_interconnections(bigger).optimum_cost, a);
    } catch (const Infeasible&) {
    }
  }
}

TEST(Oracle, DecompositionBounds) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    auto inst = small_random(seed + 1000);
    try {
      double full = exact_min_interconnections(inst).optimum_cost;
      double m = exact_min_for_matching(inst).optimum_cost;
      double a = exact_min_for_accessibility(inst).optimum_cost;
      EXPECT_LE(std::max(m, a), full);
      EXPECT_LE(full, m + a);
    } catch (const Infeasible&) {
    }
  }
}

TEST(NumericCheck, Basics) {
  EXPECT_EQ(numeric_realization_check(SparsityPattern(1, 1), SparsityPattern(1, 1, {{0, 0}}), 1, 1),
            NumericVerdict::Controllable);
  EXPECT_EQ(numeric_realization_check(SparsityPattern::from_rows(2, {"0*", "*0"}), SparsityPattern(2, 1), 3, 1),
            NumericVerdict::NotControllable);
  EXPECT_EQ(numeric_realization_check(SparsityPattern(2, 2), SparsityPattern(2, 1, {{0, 0}, {1, 0}}), 3, 1),
            NumericVerdict::NotControllable);
  EXPECT_THROW(numeric_realization_check(SparsityPattern(51, 51), SparsityPattern(51, 0), 1, 1), TooLarge);
}

TEST(NumericCheck, NeverContradictsStructuralRejection) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution coin(0.25);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + t % 8;
    std::vector<SparsityPattern::Entry> a, b;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (coin(rng)) a.emplace_back(r, c);
      }
      if (coin(rng)) b.emplace_back(r, 0);
    }
    SparsityPattern ap(n, n, a), bp(n, 1, b);
    auto v = numeric_realization_check(ap, bp, 3, t);
    if (!check_structural_controllability(ap, bp).controllable) EXPECT_EQ(v, NumericVerdict::NotControllable);
  }
}

}  // namespace
