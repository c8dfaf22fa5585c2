#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>
#include <string>
#include <utility>
#include <vector>

#include "graphbgs/errors.hpp"

namespace graphbgs {

/// N x M matrix of per-instance feature vectors plus node identifiers.
struct FeatureMatrix {
  Eigen::MatrixXd data;               // N x M, row per instance
  std::vector<std::string> node_ids;  // N unique identifiers

  Eigen::Index n() const { return data.rows(); }
  Eigen::Index dim() const { return data.cols(); }

  // Throws DataError unless N >= 2, M >= 1, all entries finite, ids unique.
  void validate() const;
};

// Undirected edge, stored once with i < j.
struct WeightedEdge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};

/// Unordered node pairs (i < j), canonically sorted.
using EdgeSet = std::vector<std::pair<int, int>>;

/// Undirected weighted graph with per-node degrees.
struct Graph {
  int n_nodes = 0;
  std::vector<WeightedEdge> edges;  // each i < j, weight > 0
  Eigen::VectorXd degrees;          // degrees(i) = sum of incident weights

  static Graph from_edges(int n_nodes, std::vector<WeightedEdge> edges);

  Eigen::SparseMatrix<double> adjacency() const;
};

/// Combinatorial Laplacian L = D - W of a Graph.
struct Laplacian {
  Eigen::SparseMatrix<double> matrix;  // symmetric PSD, zero row sums

  Eigen::Index n() const { return matrix.rows(); }
  Eigen::VectorXd degrees() const { return matrix.diagonal(); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
};

struct KernelBandwidth {
  double sigma = 0.0;
  std::size_t edge_count = 0;
  Eigen::Index node_count = 0;
};

enum class ConnectPolicy { connect, error };

double pairwise_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b);

// Symmetrized union of per-node k-nearest-neighbor links. Ties at the k-th
// distance break toward the smaller node index.
EdgeSet knn_edges(const FeatureMatrix& features, int k);

// sigma = sum of edge distances / (|E| + N), undirected edges counted once.
KernelBandwidth estimate_sigma(const FeatureMatrix& features, const EdgeSet& edges);

// w_ij = exp(-d(i,j)^2 / sigma^2)
Graph gaussian_weights(const FeatureMatrix& features, const EdgeSet& edges,
                       double sigma);

Laplacian build_laplacian(const Graph& graph);

// Components sorted by smallest member index; members ascending.
std::vector<std::vector<int>> connected_components(const Graph& graph);

struct BuildReport {
  KernelBandwidth bandwidth;
  std::size_t components_before_connect = 0;
  std::vector<WeightedEdge> added_edges;
  std::size_t zero_distance_edges = 0;
};

// Full pipeline: knn -> sigma -> Gaussian weights -> connectivity policy.
// k is capped at N-1. With ConnectPolicy::connect, each extra component is
// attached through the minimum-distance cross-component pair.
Graph build_knn_graph(const FeatureMatrix& features, int k,
                      ConnectPolicy policy = ConnectPolicy::connect,
                      BuildReport* report = nullptr);

// ---- File formats ----

// Binary container: magic "GBGSFEAT", version u32, N u64, M u64,
// row-major f64 data, then length-prefixed UTF-8 node ids.
void save_features(const FeatureMatrix& features, const std::string& path);
FeatureMatrix load_features(const std::string& path);

// CSV import: one row per node, first column node_id.
FeatureMatrix load_features_csv(const std::string& path);

// Text edge list "i j w" with header "# nodes=N".
void save_graph(const Graph& graph, const std::string& path);
Graph load_graph(const std::string& path);

}  // namespace graphbgs
