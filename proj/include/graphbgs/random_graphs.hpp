#pragma once

#include <cstdint>
#include <random>

#include "graphbgs/graph.hpp"

namespace graphbgs {

// Random connected weighted graph: a random spanning tree plus extra edges
// with probability edge_prob, weights uniform in (0.1, 1.1].
Graph random_connected_graph(int n_nodes, std::mt19937_64& rng,
                             double edge_prob = 0.3);

}  // namespace graphbgs
