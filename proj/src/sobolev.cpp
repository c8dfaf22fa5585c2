#include "graphbgs/sobolev.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "graphbgs/errors.hpp"

namespace graphbgs {

void SobolevParams::validate() const {
  if (epsilon < 0.0) throw ConfigError("epsilon must be >= 0");
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
}

int SobolevParams::solver_beta() const {
  validate();
  if (!(epsilon > 0.0))
    throw ConfigError("solver requires epsilon > 0 (L + eps*I invertible)");
  const double rounded = std::round(beta);
  if (std::abs(beta - rounded) > 1e-12 || rounded < 1.0)
    throw ConfigError(
        "solver paths require a positive integer beta; fractional beta is "
        "only available through the spectral norm path");
  return static_cast<int>(rounded);
}

void LabelMatrix::validate() const {
  if (classes() < 2) throw DataError("label matrix needs Q >= 2 classes");
  sampled.validate(n());
  for (int s : sampled.indices) {
    double sum = 0.0;
    for (Eigen::Index q = 0; q < classes(); ++q) {
      const double v = matrix(s, q);
      if (v != 0.0 && v != 1.0)
        throw DataError("sampled label row " + std::to_string(s) +
                        " is not one-hot");
      sum += v;
    }
    if (sum != 1.0)
      throw DataError("sampled label row " + std::to_string(s) +
                      " does not sum to 1");
  }
}

double hilbert_inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                     const Graph& graph) {
  if (f.size() != graph.n_nodes || g.size() != graph.n_nodes)
    throw DataError("hilbert_inner: signal length mismatch");
  return (f.array() * g.array() * graph.degrees.array()).sum();
}

double sobolev_norm(const Eigen::VectorXd& f, const Laplacian& laplacian,
                    const SobolevParams& params) {
  params.validate();
  if (f.size() != laplacian.n())
    throw DataError("sobolev_norm: signal length mismatch");
  const SpectralBasis basis = eigendecompose(laplacian);
  const Eigen::VectorXd scale =
      (basis.eigenvalues.array() + params.epsilon)
          .max(0.0)
          .pow(params.beta / 2.0);
  const Eigen::VectorXd filtered =
      basis.eigenvectors *
      (scale.array() * gft(basis, f).array()).matrix();
  const double sq =
      (filtered.array().square() * laplacian.degrees().array()).sum();
  return std::sqrt(std::max(sq, 0.0));
}

namespace {

// ((L + eps I)^{-1})^beta as a dense matrix.
Eigen::MatrixXd inverse_kernel(const Laplacian& laplacian, double epsilon,
                               int beta) {
  const Eigen::Index n = laplacian.n();
  Eigen::MatrixXd a = laplacian.dense();
  a.diagonal().array() += epsilon;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw NumericalError("L + eps*I is not positive definite");
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd kernel = inv;
  for (int p = 1; p < beta; ++p) kernel = kernel * inv;
  return kernel;
}

RecoveredSignal assemble_solution(const Eigen::MatrixXd& kernel_cols,
                                  const LabelMatrix& labels) {
  // kernel_cols is K M^T (N x m); Gram = M K M^T.
  const auto m = static_cast<Eigen::Index>(labels.sampled.size());
  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    gram.row(j) = kernel_cols.row(labels.sampled.indices[j]);
  const Eigen::MatrixXd y_s = decimate_rows(labels.matrix, labels.sampled);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("sampled Gram system is singular");
  RecoveredSignal out;
  out.scores = kernel_cols * ldlt.solve(y_s);
  const double err =
      (decimate_rows(out.scores, labels.sampled) - y_s).cwiseAbs().maxCoeff();
  if (err > 1e-6)
    throw NumericalError("interpolation constraint violated, error " +
                         std::to_string(err));
  out.labels = classify(out.scores);
  return out;
}

}  // namespace

RecoveredSignal solve_closed_form(const Laplacian& laplacian,
                                  const LabelMatrix& labels,
                                  const SobolevParams& params) {
  labels.validate();
  const int beta = params.solver_beta();
  if (labels.n() != laplacian.n())
    throw DataError("label matrix size does not match Laplacian");
  const Eigen::MatrixXd kernel =
      inverse_kernel(laplacian, params.epsilon, beta);
  const auto m = static_cast<Eigen::Index>(labels.sampled.size());
  Eigen::MatrixXd kernel_cols(laplacian.n(), m);
  for (Eigen::Index j = 0; j < m; ++j)
    kernel_cols.col(j) = kernel.col(labels.sampled.indices[j]);
  return assemble_solution(kernel_cols, labels);
}

RecoveredSignal solve_iterative(const Laplacian& laplacian,
                                const LabelMatrix& labels,
                                const SobolevParams& params, double tol,
                                int max_iter) {
  labels.validate();
  const int beta = params.solver_beta();
  if (labels.n() != laplacian.n())
    throw DataError("label matrix size does not match Laplacian");

  Eigen::SparseMatrix<double> system = laplacian.matrix;
  for (Eigen::Index i = 0; i < system.rows(); ++i)
    system.coeffRef(i, i) += params.epsilon;
  system.makeCompressed();

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                           Eigen::Lower | Eigen::Upper>
      cg(system);
  cg.setTolerance(tol);
  cg.setMaxIterations(max_iter);

  const auto m = static_cast<Eigen::Index>(labels.sampled.size());
  Eigen::MatrixXd kernel_cols(laplacian.n(), m);
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(laplacian.n());
    w(labels.sampled.indices[j]) = 1.0;
    for (int p = 0; p < beta; ++p) {
      const Eigen::VectorXd rhs = w;
      w = cg.solve(rhs);
      if (cg.info() != Eigen::Success)
        throw NumericalError(
            "conjugate gradient did not converge, residual " +
            std::to_string(cg.error()));
    }
    kernel_cols.col(j) = w;
  }
  return assemble_solution(kernel_cols, labels);
}

std::vector<int> classify(const Eigen::MatrixXd& scores) {
  if (!scores.allFinite()) throw NumericalError("classify: non-finite scores");
  std::vector<int> labels(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (Eigen::Index q = 1; q < scores.cols(); ++q)
      if (scores(i, q) > scores(i, best)) best = static_cast<int>(q);
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

namespace {

void require_symmetric(const Eigen::MatrixXd& psi, const char* what) {
  if (psi.rows() != psi.cols() ||
      (psi - psi.transpose()).cwiseAbs().maxCoeff() >
          1e-12 * std::max(1.0, psi.cwiseAbs().maxCoeff()))
    throw DataError(std::string(what) + ": perturbation must be symmetric");
}

}  // namespace

PerturbationReport condition_bounds(const Laplacian& laplacian,
                                    const Eigen::MatrixXd& perturbation) {
  require_symmetric(perturbation, "condition_bounds");
  if (perturbation.rows() != laplacian.n())
    throw DataError("condition_bounds: size mismatch");
  const Eigen::MatrixXd l = laplacian.dense();
  const Eigen::MatrixXd sum = l + perturbation;

  const auto singular_values = [](const Eigen::MatrixXd& a) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
  };
  PerturbationReport report;
  report.sigma_max_laplacian = singular_values(l).maxCoeff();
  report.sigma_max_perturbation = singular_values(perturbation).maxCoeff();
  const Eigen::VectorXd sv_sum = singular_values(sum);
  const double sigma_max_sum = sv_sum.maxCoeff();
  report.sigma_min_sum = sv_sum.minCoeff();
  if (report.sigma_min_sum <= 0.0) {
    report.kappa = std::numeric_limits<double>::infinity();
    report.upper_bound = std::numeric_limits<double>::infinity();
    report.lower_bound = sigma_max_sum / report.sigma_max_perturbation;
    report.sandwich_ok = false;
    return report;
  }
  report.kappa = sigma_max_sum / report.sigma_min_sum;
  report.lower_bound = sigma_max_sum / report.sigma_max_perturbation;
  report.upper_bound =
      (report.sigma_max_laplacian + report.sigma_max_perturbation) /
      report.sigma_min_sum;
  const double slack = 1e-9 * std::max(1.0, report.kappa);
  report.sandwich_ok = report.lower_bound <= report.kappa + slack &&
                       report.kappa <= report.upper_bound + slack;
  return report;
}

WeylReport weyl_check(const Laplacian& laplacian,
                      const Eigen::MatrixXd& perturbation) {
  require_symmetric(perturbation, "weyl_check");
  if (perturbation.rows() != laplacian.n())
    throw DataError("weyl_check: size mismatch");
  const Eigen::MatrixXd l = laplacian.dense();
  WeylReport report;
  report.laplacian_eigs =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(l).eigenvalues();
  report.perturbation_eigs =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(perturbation)
          .eigenvalues();
  report.sum_eigs = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                        Eigen::MatrixXd(l + perturbation))
                        .eigenvalues();
  const double psi_min = report.perturbation_eigs(0);
  const double psi_max =
      report.perturbation_eigs(report.perturbation_eigs.size() - 1);
  const double scale =
      std::max({1.0, std::abs(psi_max), report.laplacian_eigs.cwiseAbs().maxCoeff()});
  report.ok = true;
  for (Eigen::Index i = 0; i < report.sum_eigs.size(); ++i) {
    const double lo = report.laplacian_eigs(i) + psi_min;
    const double hi = report.laplacian_eigs(i) + psi_max;
    if (report.sum_eigs(i) < lo - 1e-8 * scale ||
        report.sum_eigs(i) > hi + 1e-8 * scale) {
      report.ok = false;
      break;
    }
  }
  return report;
}

}  // namespace graphbgs
