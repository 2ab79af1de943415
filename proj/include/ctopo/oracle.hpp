#ifndef CTOPO_ORACLE_HPP
#define CTOPO_ORACLE_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctopo/errors.hpp"
#include "ctopo/system_model.hpp"

namespace ctopo {

struct OracleOptions {
  std::size_t max_candidates = 512;
  std::uint64_t max_explored = std::uint64_t{1} << 24;
  std::size_t max_states = 64;
};

struct OracleResult {
  double optimum_cost = 0.0;  // +inf when a budget was given and not met
  EdgeSet optimum_edges;
  std::uint64_t explored = 0;
  std::optional<double> budget;
  std::optional<bool> within_budget;
};

enum class OracleTarget { Controllability, Matching, Accessibility };

namespace detail {

using Mask = std::uint64_t;

inline Mask bit(std::size_t i) { return Mask{1} << i; }

// Self-contained bitmask model of a composite system for exhaustive search.
class SearchModel {
 public:
  SearchModel(const CompositeInstance& inst, OracleTarget target, bool weighted, const OracleOptions& opt)
      : target_(target) {
    n_ = inst.total_states();
    if (n_ > opt.max_states || n_ > 64) {
      throw TooLarge("oracle supports at most " + std::to_string(std::min<std::size_t>(opt.max_states, 64)) +
                     " composite states, instance has " + std::to_string(n_));
    }
    const auto xo = inst.state_offsets();
    const auto uo = inst.input_offsets();
    m_ = uo.back();
    rows_.assign(n_, {});
    succ_.assign(n_, 0);
    seeds_ = 0;
    for (std::size_t i = 0; i < inst.subsystem_count(); ++i) {
      const auto& s = inst.subsystems[i];
      for (const auto& [p, q] : s.a_pattern.nonzeros()) {
        rows_[xo[i] + p].push_back(xo[i] + q);
        succ_[xo[i] + q] |= bit(xo[i] + p);
      }
      for (const auto& [p, q] : s.b_pattern.nonzeros()) {
        rows_[xo[i] + p].push_back(n_ + uo[i] + q);
        seeds_ |= bit(xo[i] + p);
      }
    }
    candidates_ = inst.candidate_edges();
    if (candidates_.size() > opt.max_candidates) {
      throw TooLarge("instance has " + std::to_string(candidates_.size()) + " candidate edges, oracle cap is " +
                     std::to_string(opt.max_candidates));
    }
    for (const auto& e : candidates_) {
      src_.push_back(inst.global_index(e.src));
      dst_.push_back(inst.global_index(e.dst));
      cost_.push_back(weighted ? inst.cost(e) : 1.0);
    }
  }

  std::size_t candidate_count() const { return candidates_.size(); }
  const InterconnectionEdge& candidate(std::size_t i) const { return candidates_[i]; }
  double cost(std::size_t i) const { return cost_[i]; }

  // Lower bound on the number of further edges needed, 0 iff the target holds.
  std::size_t shortfall(const std::vector<std::size_t>& chosen) const {
    std::size_t need = 0;
    if (target_ != OracleTarget::Accessibility) need = std::max(need, matching_deficiency(chosen));
    if (target_ != OracleTarget::Matching) need = std::max(need, unseeded_sources(chosen));
    return need;
  }

 private:
  std::size_t matching_deficiency(const std::vector<std::size_t>& chosen) const {
    std::vector<std::vector<std::size_t>> adj = rows_;
    for (std::size_t c : chosen) adj[dst_[c]].push_back(src_[c]);
    std::vector<std::size_t> owner(n_ + m_, SIZE_MAX);
    std::vector<char> seen;
    std::size_t size = 0;
    auto try_row = [&](auto&& self, std::size_t row) -> bool {
      for (std::size_t col : adj[row]) {
        if (seen[col]) continue;
        seen[col] = 1;
        if (owner[col] == SIZE_MAX || self(self, owner[col])) {
          owner[col] = row;
          return true;
        }
      }
      return false;
    };
    for (std::size_t row = 0; row < n_; ++row) {
      seen.assign(n_ + m_, 0);
      if (try_row(try_row, row)) ++size;
    }
    return n_ - size;
  }

  // Source components of the state digraph that hold no input-driven state.
  // Each added edge removes at most one of them.
  std::size_t unseeded_sources(const std::vector<std::size_t>& chosen) const {
    std::vector<Mask> succ = succ_;
    for (std::size_t c : chosen) succ[src_[c]] |= bit(dst_[c]);
    std::vector<Mask> reach(n_);
    for (std::size_t v = 0; v < n_; ++v) reach[v] = closure(succ, bit(v));
    Mask covered = closure(succ, seeds_);
    std::size_t count = 0;
    Mask done = covered;
    for (std::size_t v = 0; v < n_; ++v) {
      if (done & bit(v)) continue;
      Mask comp = 0;
      for (std::size_t w = 0; w < n_; ++w) {
        if ((reach[v] & bit(w)) && (reach[w] & bit(v))) comp |= bit(w);
      }
      done |= comp;
      bool entered = false;
      for (std::size_t w = 0; w < n_ && !entered; ++w) {
        if (!(comp & bit(w)) && (succ[w] & comp)) entered = true;
      }
      if (!entered) ++count;
    }
    return count;
  }

  Mask closure(const std::vector<Mask>& succ, Mask from) const {
    Mask seen = from, frontier = from;
    while (frontier) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= f - 1) next |= succ[static_cast<std::size_t>(std::countr_zero(f))];
      frontier = next & ~seen;
      seen |= next;
    }
    return seen;
  }

  OracleTarget target_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::vector<std::size_t>> rows_;
  std::vector<Mask> succ_;
  Mask seeds_ = 0;
  std::vector<InterconnectionEdge> candidates_;
  std::vector<std::size_t> src_, dst_;
  std::vector<double> cost_;
};

class Search {
 public:
  Search(const SearchModel& model, const OracleOptions& opt) : model_(model), opt_(opt) {}

  std::uint64_t explored() const { return explored_; }

  // Smallest cardinality subset reaching the target, lexicographic first among
  // those; searches up to `max_size` edges.
  std::optional<std::vector<std::size_t>> by_cardinality(std::size_t max_size) {
    const std::size_t start = evaluate({});
    for (std::size_t size = start; size <= std::min(max_size, model_.candidate_count()); ++size) {
      std::vector<std::size_t> chosen;
      if (extend(chosen, 0, size)) return chosen;
    }
    return std::nullopt;
  }

  // Cheapest subset of cost strictly below `bound`, lexicographic first among optima.
  std::optional<std::vector<std::size_t>> by_weight(double bound) {
    incumbent_cost_ = bound;
    min_cost_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < model_.candidate_count(); ++i) min_cost_ = std::min(min_cost_, model_.cost(i));
    std::vector<std::size_t> chosen;
    branch(chosen, 0, 0.0);
    return incumbent_;
  }

 private:
  std::size_t evaluate(const std::vector<std::size_t>& chosen) {
    if (++explored_ > opt_.max_explored) {
      throw TooLarge("oracle exploration budget of " + std::to_string(opt_.max_explored) + " subsets exhausted");
    }
    return model_.shortfall(chosen);
  }

  bool completable(std::vector<std::size_t>& chosen, std::size_t next) {
    const std::size_t keep = chosen.size();
    for (std::size_t i = next; i < model_.candidate_count(); ++i) chosen.push_back(i);
    const bool ok = evaluate(chosen) == 0;
    chosen.resize(keep);
    return ok;
  }

  bool extend(std::vector<std::size_t>& chosen, std::size_t next, std::size_t size) {
    const std::size_t need = evaluate(chosen);
    if (need == 0) return chosen.size() == size;
    const std::size_t left = size - chosen.size();
    if (need > left || model_.candidate_count() - next < left) return false;
    if (!completable(chosen, next)) return false;
    for (std::size_t i = next; i + left <= model_.candidate_count(); ++i) {
      chosen.push_back(i);
      if (extend(chosen, i + 1, size)) return true;
      chosen.pop_back();
    }
    return false;
  }

  void branch(std::vector<std::size_t>& chosen, std::size_t next, double cost) {
    const double eps = std::isfinite(incumbent_cost_) ? 1e-9 * std::max(1.0, incumbent_cost_) : 0.0;
    const std::size_t need = evaluate(chosen);
    if (need == 0) {
      if (cost < incumbent_cost_ - eps) {
        incumbent_cost_ = cost;
        incumbent_ = chosen;
      }
      return;
    }
    if (cost + static_cast<double>(need) * min_cost_ >= incumbent_cost_ - eps) return;
    if (!completable(chosen, next)) return;
    for (std::size_t i = next; i < model_.candidate_count(); ++i) {
      chosen.push_back(i);
      branch(chosen, i + 1, cost + model_.cost(i));
      chosen.pop_back();
    }
  }

  const SearchModel& model_;
  const OracleOptions& opt_;
  std::uint64_t explored_ = 0;
  double incumbent_cost_ = 0.0;
  double min_cost_ = 0.0;
  std::optional<std::vector<std::size_t>> incumbent_;
};

inline OracleResult solve_exact(const CompositeInstance& inst, OracleTarget target, bool weighted,
                                std::optional<double> budget, const OracleOptions& opt) {
  inst.validate();
  auto full = check_composite(inst, all_candidate_edges(inst));
  const bool feasible = target == OracleTarget::Controllability ? full.controllable
                        : target == OracleTarget::Matching      ? full.dilation_free
                                                                : full.accessible;
  if (!feasible) {
    if (target == OracleTarget::Matching) throw Stage1Infeasible(full);
    if (target == OracleTarget::Accessibility) throw Stage2Infeasible(full);
    throw Infeasible(full);
  }

  SearchModel model(inst, target, weighted, opt);
  Search search(model, opt);
  std::optional<std::vector<std::size_t>> found;
  if (weighted) {
    double bound = std::numeric_limits<double>::infinity();
    if (budget) bound = *budget + 1e-9 * std::max(1.0, std::abs(*budget));
    found = search.by_weight(bound);
  } else {
    std::size_t cap = model.candidate_count();
    if (budget) cap = static_cast<std::size_t>(std::floor(std::max(0.0, *budget) + 1e-9));
    if (!budget || *budget >= 0.0) found = search.by_cardinality(cap);
  }

  OracleResult r;
  r.explored = search.explored();
  r.budget = budget;
  if (found) {
    for (std::size_t i : *found) {
      r.optimum_edges.insert(model.candidate(i));
      r.optimum_cost += model.cost(i);
    }
  } else {
    r.optimum_cost = std::numeric_limits<double>::infinity();
  }
  if (budget) r.within_budget = found.has_value();
  return r;
}

}  // namespace detail

/// Exact minimum interconnection cost for structural controllability. With a
/// budget, answers whether some admissible set of cost <= budget exists.
inline OracleResult exact_min_interconnections(const CompositeInstance& inst, std::optional<double> budget = {},
                                               bool weighted = false, const OracleOptions& opt = {}) {
  return detail::solve_exact(inst, OracleTarget::Controllability, weighted, budget, opt);
}

/// Exact minimum cost restoring only the perfect matching.
inline OracleResult exact_min_for_matching(const CompositeInstance& inst, bool weighted = false,
                                           const OracleOptions& opt = {}) {
  return detail::solve_exact(inst, OracleTarget::Matching, weighted, std::nullopt, opt);
}

/// Exact minimum cost restoring only accessibility.
inline OracleResult exact_min_for_accessibility(const CompositeInstance& inst, bool weighted = false,
                                                const OracleOptions& opt = {}) {
  return detail::solve_exact(inst, OracleTarget::Accessibility, weighted, std::nullopt, opt);
}

enum class NumericVerdict { Controllable, NotControllable, Inconclusive };

inline std::string to_string(NumericVerdict v) {
  switch (v) {
    case NumericVerdict::Controllable:
      return "controllable";
    case NumericVerdict::NotControllable:
      return "not-controllable";
    default:
      return "inconclusive";
  }
}

/// Rank of [B, AB, ..., A^(n-1)B] for random realizations with entries in [1, 2].
inline std::size_t controllability_rank(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.cols();
  if (n == 0) return 0;
  Eigen::MatrixXd k(n, n * m);
  Eigen::MatrixXd block = b;
  for (Eigen::Index step = 0; step < n; ++step) {
    for (Eigen::Index c = 0; c < m; ++c) {
      double norm = block.col(c).norm();
      if (norm > 0.0) block.col(c) /= norm;
    }
    k.middleCols(step * m, m) = block;
    block = a * block;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  lu.setThreshold(1e-9);
  return static_cast<std::size_t>(lu.rank());
}

inline NumericVerdict numeric_realization_check(const SparsityPattern& a, const SparsityPattern& b,
                                                std::size_t trials, std::uint64_t seed, std::size_t max_states = 50) {
  if (a.rows() > max_states) {
    throw TooLarge("numeric check supports at most " + std::to_string(max_states) + " states");
  }
  if (trials == 0) throw InvalidArgument("trials must be positive");
  const auto structural = check_structural_controllability(a, b);
  const Eigen::Index n = static_cast<Eigen::Index>(a.rows());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(1.0, 2.0);
  for (std::size_t t = 0; t < trials; ++t) {
    Eigen::MatrixXd am = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd bm = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(b.cols()));
    for (const auto& [r, c] : a.nonzeros()) am(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = value(rng);
    for (const auto& [r, c] : b.nonzeros()) bm(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = value(rng);
    if (controllability_rank(am, bm) == a.rows()) return NumericVerdict::Controllable;
  }
  return structural.controllable ? NumericVerdict::Inconclusive : NumericVerdict::NotControllable;
}

}  // namespace ctopo

#endif  // CTOPO_ORACLE_HPP
