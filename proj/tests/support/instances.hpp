#ifndef CTOPO_TESTS_INSTANCES_HPP
#define CTOPO_TESTS_INSTANCES_HPP

#include "ctopo/system_model.hpp"

namespace fixtures {

// Four-subsystem worked example, 0-based. Only S0 carries an input.
//   S0: x0 -> x1, x0 -> x2, self-loop on x2, input on x0
//   S1: 2-cycle, no input
//   S2: x0 <-> x1 <-> x2
//   S3: x0 -> x1, no input
// Neighbours: 0 -> 2, 1 -> 0, 2 -> 1, 2 -> 3.
inline ctopo::CompositeInstance worked_example() {
  using ctopo::SparsityPattern;
  ctopo::CompositeInstance inst;
  inst.subsystems = {
      {SparsityPattern(3, 3, {{1, 0}, {2, 0}, {2, 2}}), SparsityPattern(3, 1, {{0, 0}})},
      {SparsityPattern(2, 2, {{1, 0}, {0, 1}}), SparsityPattern(2, 0)},
      {SparsityPattern(3, 3, {{1, 0}, {0, 1}, {2, 1}, {1, 2}}), SparsityPattern(3, 0)},
      {SparsityPattern(2, 2, {{1, 0}}), SparsityPattern(2, 0)},
  };
  inst.neighbors = {{2}, {0}, {1, 3}, {}};
  return inst;
}

inline ctopo::InterconnectionEdge edge(std::size_t i, std::size_t q, std::size_t j, std::size_t p) {
  return {{i, q}, {j, p}, std::nullopt};
}

// Reference five-edge design for the worked example.
inline ctopo::EdgeSet reference_design() {
  return {edge(0, 1, 2, 2), edge(2, 2, 3, 0), edge(0, 1, 2, 0), edge(2, 0, 1, 0), edge(2, 0, 3, 0)};
}

}  // namespace fixtures

#endif  // CTOPO_TESTS_INSTANCES_HPP
