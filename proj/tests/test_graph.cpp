#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "graphbgs/graph.hpp"
#include "graphbgs/random_graphs.hpp"
#include "graphbgs/spectral.hpp"

using namespace graphbgs;

namespace {

FeatureMatrix points1d(const std::vector<double>& xs) {
  FeatureMatrix fm;
  fm.data.resize(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fm.data(static_cast<Eigen::Index>(i), 0) = xs[i];
    fm.node_ids.push_back("p" + std::to_string(i));
  }
  return fm;
}

}  // namespace

TEST_CASE("pairwise distance") {
  Eigen::VectorXd a(2), b(2);
  a << 0, 0;
  b << 3, 4;
  CHECK(pairwise_distance(a, b) == doctest::Approx(5.0));
  CHECK(pairwise_distance(b, a) == doctest::Approx(5.0));
  CHECK(pairwise_distance(a, a) == 0.0);

  Eigen::VectorXd c(3), d(3);
  c << 1, 2, 3;
  d << 4, 6, 3;
  CHECK(pairwise_distance(c, d) == doctest::Approx(5.0));

  Eigen::VectorXd e(3);
  CHECK_THROWS_AS(pairwise_distance(a, e), DataError);
}

TEST_CASE("knn edges on collinear points") {
  const FeatureMatrix fm = points1d({0, 1, 10});
  const EdgeSet edges = knn_edges(fm, 1);
  // 10 -> 1 symmetrizes into {1,2}
  CHECK(edges == EdgeSet{{0, 1}, {1, 2}});
}

TEST_CASE("knn with two nodes") {
  const FeatureMatrix fm = points1d({0, 5});
  CHECK(knn_edges(fm, 1) == EdgeSet{{0, 1}});
  CHECK_THROWS_AS(knn_edges(fm, 2), ConfigError);
}

TEST_CASE("knn permutation invariance") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  FeatureMatrix fm;
  const int n = 12;
  fm.data.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    fm.node_ids.push_back("n" + std::to_string(i));
    for (int j = 0; j < 3; ++j) fm.data(i, j) = gauss(rng);
  }
  const EdgeSet base = knn_edges(fm, 3);

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  FeatureMatrix shuffled = fm;
  for (int i = 0; i < n; ++i) shuffled.data.row(perm[i]) = fm.data.row(i);
  EdgeSet mapped;
  for (const auto& [i, j] : knn_edges(shuffled, 3)) {
    // map back to original labels
    const int oi = static_cast<int>(
        std::find(perm.begin(), perm.end(), i) - perm.begin());
    const int oj = static_cast<int>(
        std::find(perm.begin(), perm.end(), j) - perm.begin());
    mapped.emplace_back(std::min(oi, oj), std::max(oi, oj));
  }
  std::sort(mapped.begin(), mapped.end());
  CHECK(mapped == base);
}

TEST_CASE("sigma estimate") {
  const FeatureMatrix fm = points1d({0, 1, 2});
  const EdgeSet edges{{0, 1}, {1, 2}, {0, 2}};
  const KernelBandwidth bw = estimate_sigma(fm, edges);
  CHECK(bw.sigma == doctest::Approx(2.0 / 3.0));
  CHECK(bw.edge_count == 3);

  const FeatureMatrix pair = points1d({0, 2});
  CHECK(estimate_sigma(pair, {{0, 1}}).sigma == doctest::Approx(2.0 / 3.0));

  const FeatureMatrix dup = points1d({3, 3});
  CHECK_THROWS_AS(estimate_sigma(dup, {{0, 1}}), NumericalError);
  CHECK_THROWS_AS(estimate_sigma(fm, {}), DataError);
}

TEST_CASE("gaussian weights") {
  const double sigma = 2.0 / 3.0;
  const FeatureMatrix fm = points1d({0, 2});
  const Graph g = gaussian_weights(fm, {{0, 1}}, sigma);
  CHECK(g.edges.size() == 1);
  CHECK(g.edges[0].weight == doctest::Approx(std::exp(-9.0)));

  const FeatureMatrix unit = points1d({0, sigma});
  CHECK(gaussian_weights(unit, {{0, 1}}, sigma).edges[0].weight ==
        doctest::Approx(std::exp(-1.0)));

  CHECK_THROWS_AS(gaussian_weights(fm, {{0, 1}}, 0.0), ConfigError);
  CHECK_THROWS_AS(gaussian_weights(fm, {{0, 1}}, -1.0), ConfigError);
}

TEST_CASE("gaussian weight monotone in distance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(0.01, 5.0);
  const double sigma = 0.8;
  for (int t = 0; t < 200; ++t) {
    double d1 = dist(rng), d2 = dist(rng);
    if (d1 > d2) std::swap(d1, d2);
    if (d1 == d2) continue;
    const FeatureMatrix a = points1d({0, d1});
    const FeatureMatrix b = points1d({0, d2});
    CHECK(gaussian_weights(a, {{0, 1}}, sigma).edges[0].weight >
          gaussian_weights(b, {{0, 1}}, sigma).edges[0].weight);
  }
}

TEST_CASE("laplacian of small paths") {
  const Graph p2 = Graph::from_edges(2, {{0, 1, 1.0}});
  Eigen::MatrixXd l2 = build_laplacian(p2).dense();
  Eigen::MatrixXd expected2(2, 2);
  expected2 << 1, -1, -1, 1;
  CHECK((l2 - expected2).cwiseAbs().maxCoeff() == 0.0);

  const Graph p3 = Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  Eigen::MatrixXd l3 = build_laplacian(p3).dense();
  Eigen::MatrixXd expected3(3, 3);
  expected3 << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK((l3 - expected3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("triangle laplacian spectrum") {
  const Graph k3 =
      Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_laplacian(k3).dense());
  CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(es.eigenvalues()(1) == doctest::Approx(3.0));
  CHECK(es.eigenvalues()(2) == doctest::Approx(3.0));
}

TEST_CASE("graph structural invariants on random graphs") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    std::uniform_int_distribution<int> size(3, 50);
    const Graph g = random_connected_graph(size(rng), rng);
    const Eigen::MatrixXd w = Eigen::MatrixXd(g.adjacency());
    CHECK((w - w.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(w.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK((w.rowwise().sum() - g.degrees).cwiseAbs().maxCoeff() < 1e-12);

    const Laplacian lap = build_laplacian(g);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.n_nodes);
    CHECK((lap.matrix * ones).cwiseAbs().maxCoeff() < 1e-10);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd x(g.n_nodes);
    for (int i = 0; i < g.n_nodes; ++i) x(i) = gauss(rng);
    CHECK(x.dot(lap.matrix * x) >= -1e-10 * x.squaredNorm());
  }
}

TEST_CASE("zero eigenvalue multiplicity matches component count") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const Graph a = random_connected_graph(8, rng);
    const Graph b = random_connected_graph(6, rng);
    // disjoint union
    std::vector<WeightedEdge> edges = a.edges;
    for (const auto& e : b.edges) edges.push_back({e.i + 8, e.j + 8, e.weight});
    const Graph g = Graph::from_edges(14, std::move(edges));
    CHECK(connected_components(g).size() == 2);
    const SpectralBasis basis = eigendecompose(build_laplacian(g));
    int zeros = 0;
    for (Eigen::Index i = 0; i < basis.n(); ++i)
      if (std::abs(basis.eigenvalues(i)) < 1e-8) ++zeros;
    CHECK(zeros == 2);
  }
}

TEST_CASE("connected components") {
  const Graph p3 = Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  CHECK(connected_components(p3) ==
        std::vector<std::vector<int>>{{0, 1, 2}});

  const Graph two = Graph::from_edges(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK(connected_components(two) ==
        std::vector<std::vector<int>>{{0, 1}, {2, 3}});
}

TEST_CASE("knn over separated clusters splits, connect policy rejoins") {
  const FeatureMatrix fm = points1d({0, 0.1, 0.2, 100, 100.1, 100.2});
  const EdgeSet edges = knn_edges(fm, 2);
  const Graph split = gaussian_weights(fm, edges, 1.0);
  CHECK(connected_components(split).size() == 2);

  CHECK_THROWS_AS(build_knn_graph(fm, 2, ConnectPolicy::error), DataError);

  BuildReport report;
  const Graph joined = build_knn_graph(fm, 2, ConnectPolicy::connect, &report);
  CHECK(connected_components(joined).size() == 1);
  CHECK(report.components_before_connect == 2);
  REQUIRE(report.added_edges.size() == 1);
  // closest cross-cluster pair is 0.2 -- 100
  CHECK(report.added_edges[0].i == 2);
  CHECK(report.added_edges[0].j == 3);
}

TEST_CASE("feature file round trip") {
  FeatureMatrix fm = points1d({0.5, -1.25, 3.75});
  const std::string path = "test_features.bin";
  save_features(fm, path);
  const FeatureMatrix loaded = load_features(path);
  CHECK(loaded.node_ids == fm.node_ids);
  CHECK((loaded.data - fm.data).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("feature csv import") {
  const std::string path = "test_features.csv";
  {
    std::ofstream os(path);
    os << "a,1.0,2.0\nb,3.0,4.0\n";
  }
  const FeatureMatrix fm = load_features_csv(path);
  CHECK(fm.n() == 2);
  CHECK(fm.dim() == 2);
  CHECK(fm.node_ids == std::vector<std::string>{"a", "b"});
  CHECK(fm.data(1, 1) == 4.0);
  std::remove(path.c_str());
}

TEST_CASE("graph file round trip") {
  std::mt19937_64 rng(5);
  const Graph g = random_connected_graph(10, rng);
  const std::string path = "test_graph.txt";
  save_graph(g, path);
  const Graph loaded = load_graph(path);
  CHECK(loaded.n_nodes == g.n_nodes);
  REQUIRE(loaded.edges.size() == g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(loaded.edges[i].i == g.edges[i].i);
    CHECK(loaded.edges[i].j == g.edges[i].j);
    CHECK(loaded.edges[i].weight == doctest::Approx(g.edges[i].weight));
  }
  std::remove(path.c_str());
}

TEST_CASE("invalid graphs rejected") {
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 0, 1.0}}), DataError);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1, -1.0}}), DataError);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1, 1.0}, {1, 0, 1.0}}), DataError);
  FeatureMatrix bad = points1d({0, 1});
  bad.node_ids[1] = bad.node_ids[0];
  CHECK_THROWS_AS(bad.validate(), DataError);
}
