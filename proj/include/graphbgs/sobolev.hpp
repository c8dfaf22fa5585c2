#pragma once

#include <Eigen/Core>
#include <vector>

#include "graphbgs/graph.hpp"
#include "graphbgs/sampling.hpp"
#include "graphbgs/spectral.hpp"

namespace graphbgs {

struct SobolevParams {
  double epsilon = 0.2;
  double beta = 1.0;

  // Throws ConfigError unless epsilon >= 0 and beta > 0.
  void validate() const;
  // Solver paths additionally need epsilon > 0 and integer beta.
  int solver_beta() const;
};

/// One-hot label rows with the subset of rows whose labels are known.
struct LabelMatrix {
  Eigen::MatrixXd matrix;  // N x Q, rows at sampled indices are one-hot
  SamplingSet sampled;

  Eigen::Index n() const { return matrix.rows(); }
  Eigen::Index classes() const { return matrix.cols(); }
  void validate() const;
};

struct RecoveredSignal {
  Eigen::MatrixXd scores;   // N x Q interpolated class scores
  std::vector<int> labels;  // row-wise argmax, ties toward class 0
};

struct PerturbationReport {
  double sigma_max_laplacian = 0.0;
  double sigma_max_perturbation = 0.0;
  double sigma_min_sum = 0.0;
  double kappa = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool sandwich_ok = false;
};

struct WeylReport {
  Eigen::VectorXd laplacian_eigs;     // lambda_i
  Eigen::VectorXd perturbation_eigs;  // psi_i
  Eigen::VectorXd sum_eigs;           // nu_i of L + Psi
  bool ok = false;
};

// Degree-weighted inner product sum_v f(v) g(v) D(v,v).
double hilbert_inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                     const Graph& graph);

// ||(L + eps I)^{beta/2} f|| in the degree-weighted norm; spectral path,
// so real beta is allowed but N must fit the dense limit.
double sobolev_norm(const Eigen::VectorXd& f, const Laplacian& laplacian,
                    const SobolevParams& params);

// Minimizer of z^T (L + eps I)^beta z subject to exact interpolation of the
// sampled labels, solved per class through the dense closed form.
RecoveredSignal solve_closed_form(const Laplacian& laplacian,
                                  const LabelMatrix& labels,
                                  const SobolevParams& params);

// Same problem through per-sample conjugate-gradient solves; suited to
// graphs past the dense limit.
RecoveredSignal solve_iterative(const Laplacian& laplacian,
                                const LabelMatrix& labels,
                                const SobolevParams& params,
                                double tol = 1e-10, int max_iter = 10000);

std::vector<int> classify(const Eigen::MatrixXd& scores);

// Condition-number sandwich for L + Psi.
PerturbationReport condition_bounds(const Laplacian& laplacian,
                                    const Eigen::MatrixXd& perturbation);

// Eigenvalue sandwich lambda_i + psi_1 <= nu_i <= lambda_i + psi_N.
WeylReport weyl_check(const Laplacian& laplacian,
                      const Eigen::MatrixXd& perturbation);

}  // namespace graphbgs
