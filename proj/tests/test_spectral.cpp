#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "graphbgs/random_graphs.hpp"
#include "graphbgs/spectral.hpp"

using namespace graphbgs;

namespace {

Graph path_graph(int n) {
  std::vector<WeightedEdge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return Graph::from_edges(n, std::move(edges));
}

Graph complete_graph(int n) {
  std::vector<WeightedEdge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
  return Graph::from_edges(n, std::move(edges));
}

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
  return v;
}

}  // namespace

TEST_CASE("P2 eigendecomposition") {
  const SpectralBasis basis = eigendecompose(build_laplacian(path_graph(2)));
  CHECK(basis.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(basis.eigenvalues(1) == doctest::Approx(2.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(basis.eigenvectors(0, 0) == doctest::Approx(inv_sqrt2));
  CHECK(basis.eigenvectors(1, 0) == doctest::Approx(inv_sqrt2));
}

TEST_CASE("P3 eigenvalues are 0, 1, 3") {
  const SpectralBasis basis = eigendecompose(build_laplacian(path_graph(3)));
  CHECK(basis.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(basis.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(basis.eigenvalues(2) == doctest::Approx(3.0));
}

TEST_CASE("complete graph eigenvalues") {
  for (int n = 3; n <= 10; ++n) {
    const SpectralBasis basis =
        eigendecompose(build_laplacian(complete_graph(n)));
    CHECK(std::abs(basis.eigenvalues(0)) < 1e-10);
    for (Eigen::Index i = 1; i < n; ++i)
      CHECK(basis.eigenvalues(i) == doctest::Approx(double(n)));
  }
}

TEST_CASE("basis invariants") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 10; ++t) {
    std::uniform_int_distribution<int> size(3, 40);
    const int n = size(rng);
    const Laplacian lap = build_laplacian(random_connected_graph(n, rng));
    const SpectralBasis basis = eigendecompose(lap);
    const Eigen::MatrixXd& u = basis.eigenvectors;
    CHECK((u.transpose() * u - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-8);
    const Eigen::MatrixXd rebuilt =
        u * basis.eigenvalues.asDiagonal() * u.transpose();
    CHECK((lap.dense() - rebuilt).norm() <= 1e-8 * lap.dense().norm());
    for (Eigen::Index i = 0; i + 1 < n; ++i)
      CHECK(basis.eigenvalues(i) <= basis.eigenvalues(i + 1) + 1e-12);
  }
}

TEST_CASE("eigendecompose size limit") {
  const Laplacian lap = build_laplacian(path_graph(10));
  CHECK_THROWS_AS(eigendecompose(lap, 5), ConfigError);
}

TEST_CASE("gft of constant signal concentrates at frequency zero") {
  std::mt19937_64 rng(2);
  const SpectralBasis basis =
      eigendecompose(build_laplacian(random_connected_graph(12, rng)));
  const Eigen::VectorXd coeffs =
      gft(basis, 3.0 * Eigen::VectorXd::Ones(12));
  CHECK(coeffs.tail(11).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(coeffs(0)) > 1.0);
}

TEST_CASE("gft of an eigenvector is a unit coefficient") {
  const SpectralBasis basis = eigendecompose(build_laplacian(path_graph(4)));
  for (Eigen::Index j = 0; j < 4; ++j) {
    Eigen::VectorXd coeffs = gft(basis, basis.eigenvectors.col(j));
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(4);
    expected(j) = 1.0;
    CHECK((coeffs - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("gft/igft round trip and Parseval") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    std::uniform_int_distribution<int> size(3, 30);
    const int n = size(rng);
    const SpectralBasis basis =
        eigendecompose(build_laplacian(random_connected_graph(n, rng)));
    const Eigen::VectorXd y = random_vector(n, rng);
    const Eigen::VectorXd coeffs = gft(basis, y);
    CHECK((igft(basis, coeffs) - y).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(coeffs.norm() - y.norm()) < 1e-10 * y.norm());
  }
  const SpectralBasis basis = eigendecompose(build_laplacian(path_graph(3)));
  CHECK(igft(basis, Eigen::VectorXd::Zero(3)).cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
  e1(0) = 1.0;
  CHECK((igft(basis, e1) - basis.eigenvectors.col(0)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK_THROWS_AS(gft(basis, Eigen::VectorXd::Zero(5)), DataError);
}

TEST_CASE("bandlimited projection") {
  std::mt19937_64 rng(6);
  const int n = 15;
  const SpectralBasis basis =
      eigendecompose(build_laplacian(random_connected_graph(n, rng)));
  const Eigen::VectorXd y = random_vector(n, rng);

  CHECK((project_bandlimited(basis, y, n) - y).cwiseAbs().maxCoeff() < 1e-10);

  const Eigen::VectorXd low = project_bandlimited(basis, y, 3);
  CHECK((project_bandlimited(basis, low, 3) - low).cwiseAbs().maxCoeff() <
        1e-10);
  CHECK(low.norm() <= y.norm() + 1e-12);
  CHECK(is_bandlimited(basis, low, 3, 1e-9));

  // rank-1 projection onto the constant eigenvector
  const Eigen::VectorXd dc = project_bandlimited(basis, y, 1);
  const Eigen::VectorXd u1 = basis.eigenvectors.col(0);
  CHECK((dc - u1 * u1.dot(y)).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(project_bandlimited(basis, y, 0), ConfigError);
  CHECK_THROWS_AS(project_bandlimited(basis, y, n + 1), ConfigError);
}

TEST_CASE("is_bandlimited edge cases") {
  const SpectralBasis basis = eigendecompose(build_laplacian(path_graph(5)));
  std::mt19937_64 rng(8);
  CHECK(is_bandlimited(basis, random_vector(5, rng), 5, 0.0));
  CHECK_FALSE(is_bandlimited(basis, basis.eigenvectors.col(4), 4, 1e-9));
}
