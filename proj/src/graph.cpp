#include "graphbgs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace graphbgs {

void FeatureMatrix::validate() const {
  if (n() < 2) throw DataError("feature matrix needs at least 2 instances");
  if (dim() < 1) throw DataError("feature matrix needs at least 1 dimension");
  if (!data.allFinite()) throw DataError("feature matrix contains NaN/Inf");
  if (static_cast<Eigen::Index>(node_ids.size()) != n())
    throw DataError("node id count does not match row count");
  std::unordered_set<std::string> seen;
  for (const auto& id : node_ids)
    if (!seen.insert(id).second) throw DataError("duplicate node id: " + id);
}

Graph Graph::from_edges(int n_nodes, std::vector<WeightedEdge> edges) {
  Graph g;
  g.n_nodes = n_nodes;
  g.degrees = Eigen::VectorXd::Zero(n_nodes);
  for (auto& e : edges) {
    if (e.i == e.j) throw DataError("self-loop rejected");
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= n_nodes) throw DataError("edge index out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw DataError("edge weight must be positive and finite");
    g.degrees(e.i) += e.weight;
    g.degrees(e.j) += e.weight;
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j)
      throw DataError("duplicate edge");
  g.edges = std::move(edges);
  return g;
}

Eigen::SparseMatrix<double> Graph::adjacency() const {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * edges.size());
  for (const auto& e : edges) {
    trip.emplace_back(e.i, e.j, e.weight);
    trip.emplace_back(e.j, e.i, e.weight);
  }
  Eigen::SparseMatrix<double> w(n_nodes, n_nodes);
  w.setFromTriplets(trip.begin(), trip.end());
  return w;
}

double pairwise_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size())
    throw DataError("pairwise_distance: dimension mismatch");
  return (a - b).norm();
}

EdgeSet knn_edges(const FeatureMatrix& features, int k) {
  features.validate();
  const int n = static_cast<int>(features.n());
  if (k < 1 || k >= n)
    throw ConfigError("knn_edges: k must satisfy 1 <= k < N");

  std::set<std::pair<int, int>> undirected;
  std::vector<std::pair<double, int>> cand(n - 1);
  for (int i = 0; i < n; ++i) {
    int c = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      cand[c++] = {(features.data.row(i) - features.data.row(j)).norm(), j};
    }
    // ties at the k-th distance break by smaller index
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (int t = 0; t < k; ++t) {
      int j = cand[t].second;
      undirected.insert({std::min(i, j), std::max(i, j)});
    }
  }
  return EdgeSet(undirected.begin(), undirected.end());
}

KernelBandwidth estimate_sigma(const FeatureMatrix& features,
                               const EdgeSet& edges) {
  if (edges.empty()) throw DataError("estimate_sigma: empty edge set");
  double sum = 0.0;
  for (const auto& [i, j] : edges)
    sum += (features.data.row(i) - features.data.row(j)).norm();
  if (sum == 0.0)
    throw NumericalError(
        "estimate_sigma: all edge distances are zero, kernel undefined");
  KernelBandwidth bw;
  bw.edge_count = edges.size();
  bw.node_count = features.n();
  bw.sigma = sum / static_cast<double>(edges.size() + features.n());
  return bw;
}

Graph gaussian_weights(const FeatureMatrix& features, const EdgeSet& edges,
                       double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian_weights: sigma must be > 0");
  std::vector<WeightedEdge> we;
  we.reserve(edges.size());
  std::size_t zero_d = 0;
  for (const auto& [i, j] : edges) {
    const double d = (features.data.row(i) - features.data.row(j)).norm();
    if (d == 0.0) ++zero_d;
    we.push_back({i, j, std::exp(-(d * d) / (sigma * sigma))});
  }
  if (zero_d > 0)
    std::cerr << "warning: " << zero_d
              << " edge(s) with zero distance assigned weight 1\n";
  return Graph::from_edges(static_cast<int>(features.n()), std::move(we));
}

Laplacian build_laplacian(const Graph& graph) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * graph.edges.size() + graph.n_nodes);
  for (const auto& e : graph.edges) {
    trip.emplace_back(e.i, e.j, -e.weight);
    trip.emplace_back(e.j, e.i, -e.weight);
  }
  for (int i = 0; i < graph.n_nodes; ++i)
    trip.emplace_back(i, i, graph.degrees(i));
  Laplacian lap;
  lap.matrix.resize(graph.n_nodes, graph.n_nodes);
  lap.matrix.setFromTriplets(trip.begin(), trip.end());
  return lap;
}

std::vector<std::vector<int>> connected_components(const Graph& graph) {
  std::vector<std::vector<int>> adj(graph.n_nodes);
  for (const auto& e : graph.edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<int> comp(graph.n_nodes, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < graph.n_nodes; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> members;
    std::queue<int> q;
    q.push(s);
    comp[s] = static_cast<int>(out.size());
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      members.push_back(v);
      for (int u : adj[v])
        if (comp[u] < 0) {
          comp[u] = comp[s];
          q.push(u);
        }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

Graph build_knn_graph(const FeatureMatrix& features, int k,
                      ConnectPolicy policy, BuildReport* report) {
  const int n = static_cast<int>(features.n());
  k = std::min(k, n - 1);
  EdgeSet edges = knn_edges(features, k);
  KernelBandwidth bw = estimate_sigma(features, edges);
  Graph g = gaussian_weights(features, edges, bw.sigma);

  auto comps = connected_components(g);
  if (report) {
    report->bandwidth = bw;
    report->components_before_connect = comps.size();
    report->zero_distance_edges = 0;
    report->added_edges.clear();
  }
  if (comps.size() > 1) {
    if (policy == ConnectPolicy::error)
      throw DataError("k-NN graph is disconnected (" +
                      std::to_string(comps.size()) + " components)");
    // Attach components one at a time through the globally closest
    // cross-component pair.
    std::vector<WeightedEdge> extra;
    while (comps.size() > 1) {
      std::vector<int> label(n, 0);
      for (std::size_t c = 0; c < comps.size(); ++c)
        for (int v : comps[c]) label[v] = static_cast<int>(c);
      double best_d = std::numeric_limits<double>::infinity();
      int bi = -1, bj = -1;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          if (label[i] == label[j]) continue;
          double d = (features.data.row(i) - features.data.row(j)).norm();
          if (d < best_d) {
            best_d = d;
            bi = i;
            bj = j;
          }
        }
      // The kernel underflows for distant components; keep the bridge
      // weight positive so the edge survives validation.
      WeightedEdge e{bi, bj,
                     std::max(std::exp(-(best_d * best_d) /
                                       (bw.sigma * bw.sigma)),
                              std::numeric_limits<double>::min())};
      extra.push_back(e);
      std::vector<WeightedEdge> all = g.edges;
      all.push_back(e);
      g = Graph::from_edges(n, std::move(all));
      comps = connected_components(g);
    }
    if (report) report->added_edges = extra;
  }
  return g;
}

// ---- File I/O ----

namespace {
constexpr char kMagic[8] = {'G', 'B', 'G', 'S', 'F', 'E', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw DataError("feature file truncated");
  return v;
}
}  // namespace

void save_features(const FeatureMatrix& features, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  write_pod(os, kVersion);
  write_pod(os, static_cast<std::uint64_t>(features.n()));
  write_pod(os, static_cast<std::uint64_t>(features.dim()));
  for (Eigen::Index i = 0; i < features.n(); ++i)
    for (Eigen::Index j = 0; j < features.dim(); ++j)
      write_pod(os, features.data(i, j));
  for (const auto& id : features.node_ids) {
    write_pod(os, static_cast<std::uint32_t>(id.size()));
    os.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  if (!os) throw DataError("write failed: " + path);
}

FeatureMatrix load_features(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DataError("not a feature file: " + path);
  const auto version = read_pod<std::uint32_t>(is);
  if (version != kVersion)
    throw DataError("unsupported feature file version " +
                    std::to_string(version));
  const auto n = read_pod<std::uint64_t>(is);
  const auto m = read_pod<std::uint64_t>(is);
  FeatureMatrix fm;
  fm.data.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < m; ++j)
      fm.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          read_pod<double>(is);
  fm.node_ids.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto len = read_pod<std::uint32_t>(is);
    std::string id(len, '\0');
    is.read(id.data(), len);
    if (!is) throw DataError("feature file truncated in id table");
    fm.node_ids.push_back(std::move(id));
  }
  fm.validate();
  return fm;
}

FeatureMatrix load_features_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open: " + path);
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    if (!std::getline(ss, cell, ',')) continue;
    ids.push_back(cell);
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw DataError("bad numeric value '" + cell + "' in " + path);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("empty feature CSV: " + path);
  FeatureMatrix fm;
  fm.node_ids = std::move(ids);
  fm.data.resize(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size())
      throw DataError("ragged feature CSV: " + path);
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      fm.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  }
  fm.validate();
  return fm;
}

void save_graph(const Graph& graph, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << "# nodes=" << graph.n_nodes << "\n";
  os.precision(17);
  for (const auto& e : graph.edges)
    os << e.i << " " << e.j << " " << e.weight << "\n";
  if (!os) throw DataError("write failed: " + path);
}

Graph load_graph(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("# nodes=", 0) != 0)
    throw DataError("graph file missing '# nodes=N' header: " + path);
  int n = 0;
  try {
    n = std::stoi(line.substr(8));
  } catch (const std::exception&) {
    throw DataError("bad node count in graph header: " + path);
  }
  std::vector<WeightedEdge> edges;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    WeightedEdge e;
    if (!(ss >> e.i >> e.j >> e.weight))
      throw DataError("bad edge line '" + line + "' in " + path);
    edges.push_back(e);
  }
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace graphbgs
