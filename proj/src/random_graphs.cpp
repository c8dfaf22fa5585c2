#include "graphbgs/random_graphs.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

namespace graphbgs {

Graph random_connected_graph(int n_nodes, std::mt19937_64& rng,
                             double edge_prob) {
  std::uniform_real_distribution<double> weight(0.1, 1.1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<int> order(static_cast<std::size_t>(n_nodes));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::set<std::pair<int, int>> pairs;
  for (int i = 1; i < n_nodes; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    int a = order[static_cast<std::size_t>(i)];
    int b = order[static_cast<std::size_t>(parent(rng))];
    pairs.insert({std::min(a, b), std::max(a, b)});
  }
  for (int i = 0; i < n_nodes; ++i)
    for (int j = i + 1; j < n_nodes; ++j)
      if (coin(rng) < edge_prob) pairs.insert({i, j});

  std::vector<WeightedEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) edges.push_back({i, j, weight(rng)});
  return Graph::from_edges(n_nodes, std::move(edges));
}

}  // namespace graphbgs
