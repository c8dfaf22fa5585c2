#include "graphbgs/verify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "graphbgs/random_graphs.hpp"
#include "graphbgs/sampling.hpp"
#include "graphbgs/sobolev.hpp"
#include "graphbgs/spectral.hpp"

namespace graphbgs {

namespace {

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
  return v;
}

Eigen::MatrixXd random_spd(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::MatrixXd b(n, n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) b(i, j) = gauss(rng);
  return b.transpose() * b + 0.01 * Eigen::MatrixXd::Identity(n, n);
}

LabelMatrix random_labels(Eigen::Index n, std::size_t m, std::mt19937_64& rng) {
  LabelMatrix labels;
  labels.matrix = Eigen::MatrixXd::Zero(n, 2);
  labels.sampled = sample_uniform(n, static_cast<double>(m) / n, rng());
  std::bernoulli_distribution coin(0.5);
  for (int s : labels.sampled.indices)
    labels.matrix(s, coin(rng) ? 1 : 0) = 1.0;
  return labels;
}

}  // namespace

SuiteResult verify_chen_recovery(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  SuiteResult result{"chen-perfect-recovery", instances, 0, ""};
  for (int t = 0; t < instances; ++t) {
    std::uniform_int_distribution<int> size(5, 30);
    const int n = size(rng);
    const Graph g = random_connected_graph(n, rng);
    const SpectralBasis basis = eigendecompose(build_laplacian(g));
    std::uniform_int_distribution<int> band(1, std::max(1, n / 2));
    const Eigen::Index rho = band(rng);
    const Eigen::VectorXd y =
        project_bandlimited(basis, random_vector(n, rng), rho);

    SamplingSet set;
    bool valid = false;
    for (int attempt = 0; attempt < 50 && !valid; ++attempt) {
      std::uniform_int_distribution<int> count(static_cast<int>(rho), n);
      set = sample_uniform(n, static_cast<double>(count(rng)) / n, rng());
      valid = verify_sampling_rank(basis, set, rho).ok;
    }
    if (!valid) {
      ++result.failures;
      result.detail = "no rank-valid sampling set found";
      continue;
    }
    const Eigen::VectorXd recovered =
        chen_recover(basis, set, decimate(y, set), rho);
    const double scale = std::max(y.norm(), 1e-12);
    if ((recovered - y).norm() > 1e-8 * scale) ++result.failures;
  }
  return result;
}

SuiteResult verify_condition_bounds(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  SuiteResult result{"condition-number-sandwich", instances, 0, ""};
  for (int t = 0; t < instances; ++t) {
    std::uniform_int_distribution<int> size(3, 20);
    const int n = size(rng);
    const Graph g = random_connected_graph(n, rng);
    const Laplacian lap = build_laplacian(g);
    if (t % 4 == 0) {
      // identity perturbation: both bounds collapse onto kappa
      std::uniform_real_distribution<double> eps_dist(0.05, 2.0);
      const double eps = eps_dist(rng);
      const PerturbationReport report = condition_bounds(
          lap, eps * Eigen::MatrixXd::Identity(n, n));
      const bool equal =
          std::abs(report.lower_bound - report.kappa) <= 1e-8 * report.kappa &&
          std::abs(report.upper_bound - report.kappa) <= 1e-8 * report.kappa;
      if (!report.sandwich_ok || !equal) ++result.failures;
    } else {
      const PerturbationReport report =
          condition_bounds(lap, random_spd(n, rng));
      if (!report.sandwich_ok) ++result.failures;
    }
  }
  return result;
}

SuiteResult verify_weyl(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  SuiteResult result{"weyl-eigenvalue-sandwich", instances, 0, ""};
  for (int t = 0; t < instances; ++t) {
    std::uniform_int_distribution<int> size(3, 20);
    const int n = size(rng);
    const Graph g = random_connected_graph(n, rng);
    const Laplacian lap = build_laplacian(g);
    if (t % 4 == 0) {
      std::uniform_real_distribution<double> eps_dist(0.05, 2.0);
      const double eps = eps_dist(rng);
      const WeylReport report =
          weyl_check(lap, eps * Eigen::MatrixXd::Identity(n, n));
      bool exact = report.ok;
      for (Eigen::Index i = 0; i < report.sum_eigs.size() && exact; ++i)
        exact = std::abs(report.sum_eigs(i) - report.laplacian_eigs(i) - eps) <=
                1e-8 * std::max(1.0, report.laplacian_eigs(i) + eps);
      if (!exact) ++result.failures;
    } else {
      if (!weyl_check(lap, random_spd(n, rng)).ok) ++result.failures;
    }
  }
  return result;
}

SuiteResult verify_solver_agreement(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  SuiteResult result{"closed-vs-iterative-solver", instances, 0, ""};
  const SobolevParams params;
  for (int t = 0; t < instances; ++t) {
    std::uniform_int_distribution<int> size(4, 50);
    const int n = size(rng);
    const Graph g = random_connected_graph(n, rng);
    const Laplacian lap = build_laplacian(g);
    std::uniform_int_distribution<int> count(1, n);
    const LabelMatrix labels =
        random_labels(n, static_cast<std::size_t>(count(rng)), rng);
    const RecoveredSignal a = solve_closed_form(lap, labels, params);
    const RecoveredSignal b = solve_iterative(lap, labels, params);
    if ((a.scores - b.scores).cwiseAbs().maxCoeff() > 1e-6) ++result.failures;
  }
  return result;
}

SuiteResult verify_solver_optimality(std::uint64_t seed, int instances,
                                     int interpolants) {
  std::mt19937_64 rng(seed);
  SuiteResult result{"solver-optimality", instances, 0, ""};
  const SobolevParams params;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < instances; ++t) {
    std::uniform_int_distribution<int> size(4, 30);
    const int n = size(rng);
    const Graph g = random_connected_graph(n, rng);
    const Laplacian lap = build_laplacian(g);
    std::uniform_int_distribution<int> count(1, n - 1);
    const LabelMatrix labels =
        random_labels(n, static_cast<std::size_t>(count(rng)), rng);
    const RecoveredSignal solved = solve_closed_form(lap, labels, params);

    Eigen::MatrixXd quad = lap.dense();
    quad.diagonal().array() += params.epsilon;
    const auto objective = [&quad](const Eigen::VectorXd& z) {
      return z.dot(quad * z);
    };
    std::vector<char> sampled(static_cast<std::size_t>(n), 0);
    for (int s : labels.sampled.indices) sampled[static_cast<std::size_t>(s)] = 1;

    bool failed = false;
    for (Eigen::Index q = 0; q < 2 && !failed; ++q) {
      const double best = objective(solved.scores.col(q));
      for (int r = 0; r < interpolants; ++r) {
        Eigen::VectorXd z = labels.matrix.col(q);
        for (int v = 0; v < n; ++v)
          if (!sampled[static_cast<std::size_t>(v)]) z(v) = gauss(rng);
        if (objective(z) < best - 1e-9) {
          failed = true;
          break;
        }
      }
    }
    if (failed) ++result.failures;
  }
  return result;
}

SuiteResult verify_norm_lemmas(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  SuiteResult result{"matrix-norm-lemmas", instances, 0, ""};
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < instances; ++t) {
    std::uniform_int_distribution<int> size(2, 20);
    const int n = size(rng);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
    const double op_norm =
        Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues().maxCoeff();
    bool failed = false;
    for (int r = 0; r < 20 && !failed; ++r) {
      const Eigen::VectorXd x = random_vector(n, rng);
      if ((a * x).norm() > op_norm * x.norm() + 1e-9) failed = true;
    }

    // ||(L + Psi) x|| >= sigma_min for unit x
    const Graph g = random_connected_graph(n == 2 ? 3 : n, rng);
    const Laplacian lap = build_laplacian(g);
    Eigen::MatrixXd sum = lap.dense() + random_spd(lap.n(), rng);
    const double sigma_min =
        Eigen::JacobiSVD<Eigen::MatrixXd>(sum).singularValues().minCoeff();
    for (int r = 0; r < 500 && !failed; ++r) {
      Eigen::VectorXd x = random_vector(lap.n(), rng);
      x.normalize();
      if ((sum * x).norm() < sigma_min - 1e-8) failed = true;
    }

    // kappa(L + eps I) strictly decreasing in eps
    double prev_kappa = 0.0;
    for (int k = 1; k <= 4 && !failed; ++k) {
      const double eps = 0.1 * k;
      const PerturbationReport report = condition_bounds(
          lap, eps * Eigen::MatrixXd::Identity(lap.n(), lap.n()));
      if (k > 1 && report.kappa >= prev_kappa) failed = true;
      prev_kappa = report.kappa;
    }
    if (failed) ++result.failures;
  }
  return result;
}

SuiteResult verify_spectral(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  SuiteResult result{"spectral-identities", instances, 0, ""};
  for (int t = 0; t < instances; ++t) {
    std::uniform_int_distribution<int> size(3, 30);
    const int n = size(rng);
    const Graph g = random_connected_graph(n, rng);
    const Laplacian lap = build_laplacian(g);
    const SpectralBasis basis = eigendecompose(lap);
    const Eigen::VectorXd y = random_vector(n, rng);
    bool failed = false;
    if (std::abs(gft(basis, y).norm() - y.norm()) > 1e-10 * y.norm())
      failed = true;
    const Eigen::MatrixXd l = lap.dense();
    for (Eigen::Index i = 0; i < n && !failed; ++i) {
      const Eigen::VectorXd u = basis.eigenvectors.col(i);
      if (std::abs(u.dot(l * u) - basis.eigenvalues(i)) >
          1e-8 * std::max(1.0, basis.eigenvalues(i)))
        failed = true;
    }
    std::uniform_int_distribution<int> band(1, n);
    const Eigen::Index rho = band(rng);
    const Eigen::VectorXd once = project_bandlimited(basis, y, rho);
    if ((project_bandlimited(basis, once, rho) - once).cwiseAbs().maxCoeff() >
        1e-10)
      failed = true;
    if (failed) ++result.failures;
  }
  return result;
}

std::vector<SuiteResult> verify_all(std::uint64_t seed) {
  return {verify_chen_recovery(seed),  verify_condition_bounds(seed + 1),
          verify_weyl(seed + 2),       verify_solver_agreement(seed + 3),
          verify_solver_optimality(seed + 4), verify_norm_lemmas(seed + 5),
          verify_spectral(seed + 6)};
}

}  // namespace graphbgs
