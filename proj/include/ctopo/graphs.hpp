#ifndef CTOPO_GRAPHS_HPP
#define CTOPO_GRAPHS_HPP

#include "ctopo/graphs/arborescence.hpp"
#include "ctopo/graphs/digraph.hpp"
#include "ctopo/graphs/matching.hpp"
#include "ctopo/graphs/scc.hpp"

#endif  // CTOPO_GRAPHS_HPP
