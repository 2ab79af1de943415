#ifndef CTOPO_SYSTEM_MODEL_HPP
#define CTOPO_SYSTEM_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctopo/errors.hpp"
#include "ctopo/graphs.hpp"

namespace ctopo {

/// Zero/nonzero structure of a matrix. Holds no numeric values.
class SparsityPattern {
 public:
  using Entry = std::pair<std::size_t, std::size_t>;

  SparsityPattern() = default;

  SparsityPattern(std::size_t rows, std::size_t cols, std::vector<Entry> nonzeros = {})
      : rows_(rows), cols_(cols), nonzeros_(std::move(nonzeros)) {
    for (const auto& [r, c] : nonzeros_) {
      if (r >= rows_ || c >= cols_) {
        throw InvalidArgument("pattern entry (" + std::to_string(r) + ", " + std::to_string(c) +
                              ") outside " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
      }
    }
    std::sort(nonzeros_.begin(), nonzeros_.end());
    nonzeros_.erase(std::unique(nonzeros_.begin(), nonzeros_.end()), nonzeros_.end());
  }

  /// Builds a pattern from row strings; '*' marks a nonzero, '0' or '.' a zero.
  static SparsityPattern from_rows(std::size_t cols, std::initializer_list<std::string_view> rows) {
    std::vector<Entry> nz;
    std::size_t r = 0;
    for (std::string_view row : rows) {
      if (row.size() != cols) throw InvalidArgument("row string has wrong length");
      for (std::size_t c = 0; c < cols; ++c) {
        if (row[c] == '*') {
          nz.emplace_back(r, c);
        } else if (row[c] != '0' && row[c] != '.') {
          throw InvalidArgument("pattern rows may only contain '*', '0' or '.'");
        }
      }
      ++r;
    }
    return SparsityPattern(rows.size(), cols, std::move(nz));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nonzero_count() const noexcept { return nonzeros_.size(); }
  const std::vector<Entry>& nonzeros() const noexcept { return nonzeros_; }

  bool contains(std::size_t r, std::size_t c) const {
    return std::binary_search(nonzeros_.begin(), nonzeros_.end(), Entry{r, c});
  }

  SparsityPattern transposed() const {
    std::vector<Entry> nz;
    nz.reserve(nonzeros_.size());
    for (const auto& [r, c] : nonzeros_) nz.emplace_back(c, r);
    return SparsityPattern(cols_, rows_, std::move(nz));
  }

  friend bool operator==(const SparsityPattern&, const SparsityPattern&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Entry> nonzeros_;
};

/// State x^i_q, 0-based subsystem and state indices.
struct StateRef {
  std::size_t subsystem = 0;
  std::size_t state = 0;

  friend auto operator<=>(const StateRef&, const StateRef&) = default;
};

/// Directed state-to-state link from one subsystem into another.
struct InterconnectionEdge {
  StateRef src;
  StateRef dst;
  std::optional<std::size_t> mode;

  friend auto operator<=>(const InterconnectionEdge&, const InterconnectionEdge&) = default;
};

using EdgeSet = std::set<InterconnectionEdge>;

inline std::string to_string(const StateRef& s) {
  return "x[" + std::to_string(s.subsystem) + "," + std::to_string(s.state) + "]";
}

inline std::string to_string(const InterconnectionEdge& e) {
  std::string out = to_string(e.src) + " -> " + to_string(e.dst);
  if (e.mode) out += " (mode " + std::to_string(*e.mode) + ")";
  return out;
}

/// Edge of the dual (transposed) system.
inline InterconnectionEdge reversed(const InterconnectionEdge& e) { return {e.dst, e.src, e.mode}; }

/// Pair (A_i, B_i). B may have zero columns, meaning the subsystem has no input.
struct Subsystem {
  SparsityPattern a_pattern;
  SparsityPattern b_pattern;

  std::size_t state_dim() const noexcept { return a_pattern.rows(); }
  std::size_t input_dim() const noexcept { return b_pattern.cols(); }

  friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

class InvalidInstance : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InadmissibleEdge : public Error {
 public:
  explicit InadmissibleEdge(const InterconnectionEdge& edge)
      : Error("inadmissible interconnection " + to_string(edge)), edge_(edge) {}

  const InterconnectionEdge& edge() const noexcept { return edge_; }

 private:
  InterconnectionEdge edge_;
};

using NeighborMap = std::vector<std::set<std::size_t>>;
using WeightMap = std::map<std::pair<StateRef, StateRef>, double>;

/// k subsystems plus the out-neighbour relation: j in neighbors[i] allows
/// edges from states of S_i into states of S_j.
struct CompositeInstance {
  std::vector<Subsystem> subsystems;
  NeighborMap neighbors;
  std::optional<WeightMap> weights;
  std::optional<std::vector<NeighborMap>> modes;

  std::size_t subsystem_count() const noexcept { return subsystems.size(); }

  std::size_t total_states() const {
    std::size_t n = 0;
    for (const auto& s : subsystems) n += s.state_dim();
    return n;
  }

  std::size_t total_inputs() const {
    std::size_t m = 0;
    for (const auto& s : subsystems) m += s.input_dim();
    return m;
  }

  std::vector<std::size_t> state_offsets() const {
    std::vector<std::size_t> out(subsystems.size() + 1, 0);
    for (std::size_t i = 0; i < subsystems.size(); ++i) out[i + 1] = out[i] + subsystems[i].state_dim();
    return out;
  }

  std::vector<std::size_t> input_offsets() const {
    std::vector<std::size_t> out(subsystems.size() + 1, 0);
    for (std::size_t i = 0; i < subsystems.size(); ++i) out[i + 1] = out[i] + subsystems[i].input_dim();
    return out;
  }

  std::size_t global_index(const StateRef& s) const { return state_offsets()[s.subsystem] + s.state; }

  StateRef locate(std::size_t global) const {
    for (std::size_t i = 0; i < subsystems.size(); ++i) {
      if (global < subsystems[i].state_dim()) return {i, global};
      global -= subsystems[i].state_dim();
    }
    throw InvalidArgument("global state index out of range");
  }

  bool in_range(const StateRef& s) const {
    return s.subsystem < subsystems.size() && s.state < subsystems[s.subsystem].state_dim();
  }

  /// True when S_dst may receive state information from S_src (in `mode`, if given).
  bool admits(std::size_t src, std::size_t dst, std::optional<std::size_t> mode = {}) const {
    if (src == dst || src >= neighbors.size()) return false;
    if (mode) {
      if (!modes || *mode >= modes->size()) return false;
      return (*modes)[*mode][src].contains(dst);
    }
    return neighbors[src].contains(dst);
  }

  bool admits(const InterconnectionEdge& e) const {
    return in_range(e.src) && in_range(e.dst) && admits(e.src.subsystem, e.dst.subsystem, e.mode);
  }

  /// Every admissible state-level interconnection (mode unset), sorted.
  std::vector<InterconnectionEdge> candidate_edges() const {
    std::vector<InterconnectionEdge> out;
    for (std::size_t i = 0; i < subsystems.size(); ++i) {
      for (std::size_t q = 0; q < subsystems[i].state_dim(); ++q) {
        for (std::size_t j : neighbors[i]) {
          for (std::size_t p = 0; p < subsystems[j].state_dim(); ++p) {
            out.push_back({{i, q}, {j, p}, std::nullopt});
          }
        }
      }
    }
    return out;
  }

  /// Installation cost c_I of an edge; uniform 1 without a weight map.
  double cost(const InterconnectionEdge& e) const {
    if (!weights) return 1.0;
    auto it = weights->find({e.src, e.dst});
    if (it == weights->end()) throw InadmissibleEdge(e);
    return it->second;
  }

  void validate() const {
    const std::size_t k = subsystems.size();
    if (k == 0) throw InvalidInstance("instance has no subsystems");
    for (std::size_t i = 0; i < k; ++i) {
      const auto& s = subsystems[i];
      const std::string where = "subsystem " + std::to_string(i) + ": ";
      if (s.state_dim() == 0) throw InvalidInstance(where + "state dimension must be positive");
      if (s.a_pattern.cols() != s.state_dim()) throw InvalidInstance(where + "A pattern must be square");
      if (s.b_pattern.rows() != s.state_dim()) {
        throw InvalidInstance(where + "B pattern row count must equal the state dimension");
      }
    }
    auto check_map = [&](const NeighborMap& map, const std::string& what) {
      if (map.size() != k) throw InvalidInstance(what + " must list one neighbour set per subsystem");
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j : map[i]) {
          if (j >= k) throw InvalidInstance(what + ": neighbour index " + std::to_string(j) + " out of range");
          if (j == i) throw InvalidInstance(what + ": subsystem " + std::to_string(i) + " lists itself");
        }
      }
    };
    check_map(neighbors, "neighbors");
    if (modes) {
      if (modes->empty()) throw InvalidInstance("modes, when present, must be non-empty");
      NeighborMap merged(k);
      for (std::size_t z = 0; z < modes->size(); ++z) {
        check_map((*modes)[z], "mode " + std::to_string(z));
        for (std::size_t i = 0; i < k; ++i) merged[i].insert((*modes)[z][i].begin(), (*modes)[z][i].end());
      }
      if (merged != neighbors) throw InvalidInstance("neighbors must equal the union of the modes");
    }
    if (weights) {
      std::size_t expected = 0;
      for (const auto& [key, w] : *weights) {
        InterconnectionEdge e{key.first, key.second, std::nullopt};
        if (!in_range(e.src) || !in_range(e.dst) || !admits(e.src.subsystem, e.dst.subsystem)) {
          throw InvalidInstance("weight given for inadmissible edge " + to_string(e));
        }
        if (!std::isfinite(w) || w <= 0.0) {
          throw InvalidInstance("weight of " + to_string(e) + " must be positive and finite");
        }
      }
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j : neighbors[i]) expected += subsystems[i].state_dim() * subsystems[j].state_dim();
      }
      if (expected != weights->size()) {
        throw InvalidInstance("weights must cover every admissible edge exactly once (" +
                              std::to_string(weights->size()) + " of " + std::to_string(expected) + ")");
      }
    }
  }

  friend bool operator==(const CompositeInstance&, const CompositeInstance&) = default;
};

struct CompositePatterns {
  SparsityPattern a;
  SparsityPattern b;
};

/// Builds (A_T, B_T): subsystem patterns on the diagonal, one nonzero per
/// interconnection in the off-diagonal blocks, B_T block diagonal.
inline CompositePatterns assemble_composite(const CompositeInstance& inst, const EdgeSet& edges) {
  const auto xo = inst.state_offsets();
  const auto uo = inst.input_offsets();
  std::vector<SparsityPattern::Entry> a_nz, b_nz;
  for (std::size_t i = 0; i < inst.subsystem_count(); ++i) {
    for (const auto& [r, c] : inst.subsystems[i].a_pattern.nonzeros()) a_nz.emplace_back(xo[i] + r, xo[i] + c);
    for (const auto& [r, c] : inst.subsystems[i].b_pattern.nonzeros()) b_nz.emplace_back(xo[i] + r, uo[i] + c);
  }
  for (const auto& e : edges) {
    if (!inst.admits(e)) throw InadmissibleEdge(e);
    // x^src feeds the dynamics of x^dst: entry (dst row, src column).
    a_nz.emplace_back(xo[e.dst.subsystem] + e.dst.state, xo[e.src.subsystem] + e.src.state);
  }
  return {SparsityPattern(xo.back(), xo.back(), std::move(a_nz)),
          SparsityPattern(xo.back(), uo.back(), std::move(b_nz))};
}

/// Outcome of the accessibility + no-dilation test.
struct ControllabilityReport {
  bool accessible = false;
  std::vector<StateRef> inaccessible_states;
  std::size_t matching_size = 0;
  std::size_t state_count = 0;
  bool dilation_free = false;
  bool controllable = false;

  std::size_t matching_deficiency() const noexcept { return state_count - matching_size; }
};

/// State digraph D(A, B): states 0..n-1, inputs n..n+m-1, arc x_q -> x_p for A(p, q) != 0.
inline graphs::DiGraph system_digraph(const SparsityPattern& a, const SparsityPattern& b) {
  const std::size_t n = a.rows();
  graphs::DiGraph g(n + b.cols());
  for (const auto& [p, q] : a.nonzeros()) g.add_edge(q, p);
  for (const auto& [p, q] : b.nonzeros()) g.add_edge(n + q, p);
  return g;
}

/// Bipartite graph B(A, B): left x'_p, right x_q then u_q, edge for every nonzero of row p.
inline graphs::BipartiteGraph system_bipartite(const SparsityPattern& a, const SparsityPattern& b) {
  const std::size_t n = a.rows();
  graphs::BipartiteGraph g(n, n + b.cols());
  for (const auto& [p, q] : a.nonzeros()) g.add_edge(p, q);
  for (const auto& [p, q] : b.nonzeros()) g.add_edge(p, n + q);
  return g;
}

/// Structural controllability: every state reachable from an input and a
/// matching saturating all state rows. States are reported as subsystem 0.
inline ControllabilityReport check_structural_controllability(const SparsityPattern& a,
                                                              const SparsityPattern& b) {
  if (a.rows() != a.cols()) throw InvalidArgument("A pattern must be square");
  if (b.rows() != a.rows()) throw InvalidArgument("B pattern row count must match A");
  const std::size_t n = a.rows();

  ControllabilityReport report;
  report.state_count = n;

  std::vector<graphs::Vertex> inputs(b.cols());
  for (std::size_t q = 0; q < b.cols(); ++q) inputs[q] = n + q;
  const auto reached = graphs::reachable_from(system_digraph(a, b), inputs);
  std::vector<char> hit(n, 0);
  for (auto v : reached) {
    if (v < n) hit[v] = 1;
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!hit[x]) report.inaccessible_states.push_back({0, x});
  }
  report.accessible = report.inaccessible_states.empty();
  report.matching_size = graphs::max_bipartite_matching(system_bipartite(a, b)).size();
  report.dilation_free = report.matching_size == n;
  report.controllable = report.accessible && report.dilation_free;
  return report;
}

/// Assembles the composite with `edges` and tests it; inaccessible states are
/// reported per subsystem.
inline ControllabilityReport check_composite(const CompositeInstance& inst, const EdgeSet& edges) {
  auto patterns = assemble_composite(inst, edges);
  auto report = check_structural_controllability(patterns.a, patterns.b);
  for (auto& s : report.inaccessible_states) s = inst.locate(s.state);
  return report;
}

inline std::string describe(const ControllabilityReport& r) {
  std::string out;
  if (!r.accessible) {
    out += "inaccessible states:";
    for (const auto& s : r.inaccessible_states) out += " " + to_string(s);
  }
  if (!r.dilation_free) {
    if (!out.empty()) out += "; ";
    out += "matching deficiency " + std::to_string(r.matching_deficiency()) + " (maximum matching " +
           std::to_string(r.matching_size) + " of " + std::to_string(r.state_count) + " states)";
  }
  return out.empty() ? "controllable" : out;
}

/// No admissible interconnection set makes the composite controllable.
class Infeasible : public Error {
 public:
  explicit Infeasible(ControllabilityReport report)
      : Error("infeasible even with every admissible interconnection: " + describe(report)),
        report_(std::move(report)) {}

  const ControllabilityReport& report() const noexcept { return report_; }

 protected:
  Infeasible(const std::string& message, ControllabilityReport report)
      : Error(message), report_(std::move(report)) {}

 private:
  ControllabilityReport report_;
};

class Stage1Infeasible : public Infeasible {
 public:
  explicit Stage1Infeasible(ControllabilityReport report)
      : Infeasible("no perfect matching even with every admissible interconnection: " + describe(report),
                   std::move(report)) {}
};

class Stage2Infeasible : public Infeasible {
 public:
  explicit Stage2Infeasible(ControllabilityReport report)
      : Infeasible("some states stay inaccessible even with every admissible interconnection: " +
                       describe(report),
                   std::move(report)) {}
};

/// Same edges with mode tags dropped.
inline EdgeSet without_modes(const EdgeSet& edges) {
  EdgeSet out;
  for (auto e : edges) {
    e.mode.reset();
    out.insert(e);
  }
  return out;
}

/// Every admissible interconnection at once.
inline EdgeSet all_candidate_edges(const CompositeInstance& inst) {
  auto c = inst.candidate_edges();
  return EdgeSet(c.begin(), c.end());
}

/// Transposed instance for observability design. A patterns are transposed,
/// the B field is read as the transpose of the sensing pattern C, and every
/// neighbour relation (including weights and modes) is reversed, so designing
/// for controllability on the result designs for observability of `inst`.
inline CompositeInstance dual_observability_instance(const CompositeInstance& inst) {
  const std::size_t k = inst.subsystem_count();
  auto reverse_map = [k](const NeighborMap& map) {
    NeighborMap out(k);
    for (std::size_t i = 0; i < map.size(); ++i) {
      for (std::size_t j : map[i]) out[j].insert(i);
    }
    return out;
  };
  CompositeInstance dual;
  for (const auto& s : inst.subsystems) dual.subsystems.push_back({s.a_pattern.transposed(), s.b_pattern});
  dual.neighbors = reverse_map(inst.neighbors);
  if (inst.weights) {
    WeightMap w;
    for (const auto& [key, c] : *inst.weights) w[{key.second, key.first}] = c;
    dual.weights = std::move(w);
  }
  if (inst.modes) {
    std::vector<NeighborMap> modes;
    for (const auto& m : *inst.modes) modes.push_back(reverse_map(m));
    dual.modes = std::move(modes);
  }
  return dual;
}

/// Single-mode instance over the union of all mode neighbour maps, with the
/// modes admitting each ordered subsystem pair.
struct SwitchedUnion {
  CompositeInstance instance;
  std::map<std::pair<std::size_t, std::size_t>, std::set<std::size_t>> pair_modes;

  /// Smallest mode admitting src -> dst.
  std::size_t first_mode(std::size_t src, std::size_t dst) const {
    auto it = pair_modes.find({src, dst});
    if (it == pair_modes.end() || it->second.empty()) {
      throw InvalidArgument("no mode admits subsystem pair " + std::to_string(src) + " -> " +
                            std::to_string(dst));
    }
    return *it->second.begin();
  }
};

inline SwitchedUnion union_instance(const CompositeInstance& inst) {
  if (!inst.modes) throw NoModes();
  SwitchedUnion out;
  out.instance = inst;
  out.instance.modes.reset();
  out.instance.neighbors.assign(inst.subsystem_count(), {});
  for (std::size_t z = 0; z < inst.modes->size(); ++z) {
    const auto& map = (*inst.modes)[z];
    for (std::size_t i = 0; i < map.size(); ++i) {
      for (std::size_t j : map[i]) {
        out.instance.neighbors[i].insert(j);
        out.pair_modes[{i, j}].insert(z);
      }
    }
  }
  return out;
}

}  // namespace ctopo

#endif  // CTOPO_SYSTEM_MODEL_HPP
