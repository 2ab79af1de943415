// Exhaustive reference solvers used only by tests. They share no code with
// the library kernels they check.
#ifndef CTOPO_TESTS_BRUTE_FORCE_HPP
#define CTOPO_TESTS_BRUTE_FORCE_HPP

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace brute {

// weight[l][r] < 0 means "no edge".
using WeightTable = std::vector<std::vector<double>>;

inline std::size_t max_matching_size(const WeightTable& w, std::size_t right) {
  std::vector<char> used(right, 0);
  std::size_t best = 0;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t l, std::size_t size) {
    if (l == w.size()) {
      best = std::max(best, size);
      return;
    }
    go(l + 1, size);
    for (std::size_t r = 0; r < right; ++r) {
      if (w[l][r] >= 0 && !used[r]) {
        used[r] = 1;
        go(l + 1, size + 1);
        used[r] = 0;
      }
    }
  };
  go(0, 0);
  return best;
}

struct Assignment {
  double weight;
  std::vector<std::size_t> partner;  // per left vertex
};

// Minimum weight left-saturating matching; lexicographically smallest partner
// vector among optima (enumeration order is lexicographic, ties keep first).
inline std::optional<Assignment> min_perfect_matching(const WeightTable& w, std::size_t right) {
  std::vector<char> used(right, 0);
  std::vector<std::size_t> partner(w.size());
  std::optional<Assignment> best;
  std::function<void(std::size_t, double)> go = [&](std::size_t l, double acc) {
    if (l == w.size()) {
      if (!best || acc < best->weight - 1e-12) best = Assignment{acc, partner};
      return;
    }
    for (std::size_t r = 0; r < right; ++r) {
      if (w[l][r] >= 0 && !used[r]) {
        used[r] = 1;
        partner[l] = r;
        go(l + 1, acc + w[l][r]);
        used[r] = 0;
      }
    }
  };
  go(0, 0.0);
  return best;
}

struct Tree {
  double weight;
  std::vector<std::size_t> parent;  // root holds SIZE_MAX
};

// arc[u][v] < 0 means "no arc u->v".
inline std::optional<Tree> min_arborescence(const WeightTable& arc, std::size_t root) {
  const std::size_t n = arc.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(n, kNone);
  std::optional<Tree> best;
  auto spans = [&]() {
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t cur = v;
      for (std::size_t steps = 0; cur != root; ++steps) {
        if (steps > n) return false;
        cur = parent[cur];
      }
    }
    return true;
  };
  std::function<void(std::size_t, double)> go = [&](std::size_t v, double acc) {
    if (v == n) {
      if (spans() && (!best || acc < best->weight - 1e-12)) best = Tree{acc, parent};
      return;
    }
    if (v == root) {
      go(v + 1, acc);
      return;
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v && arc[u][v] >= 0) {
        parent[v] = u;
        go(v + 1, acc + arc[u][v]);
      }
    }
    parent[v] = kNone;
  };
  go(0, 0.0);
  return best;
}

inline WeightTable random_table(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                double density, int max_weight) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> weight(0, max_weight);
  WeightTable t(rows, std::vector<double>(cols, -1.0));
  for (auto& row : t) {
    for (auto& cell : row) {
      if (coin(rng) < density) cell = weight(rng);
    }
  }
  return t;
}

}  // namespace brute

#endif  // CTOPO_TESTS_BRUTE_FORCE_HPP
