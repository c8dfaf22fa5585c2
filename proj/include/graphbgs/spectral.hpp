#pragma once

#include <Eigen/Core>

#include "graphbgs/graph.hpp"

namespace graphbgs {

/// Laplacian eigenbasis: nondecreasing eigenvalues and orthonormal columns.
struct SpectralBasis {
  Eigen::VectorXd eigenvalues;   // lambda_1 <= ... <= lambda_N
  Eigen::MatrixXd eigenvectors;  // columns u_1 ... u_N

  Eigen::Index n() const { return eigenvalues.size(); }

  // First rho columns (the Paley-Wiener spanning set for omega = lambda_rho).
  Eigen::MatrixXd leading(Eigen::Index rho) const {
    return eigenvectors.leftCols(rho);
  }
};

inline constexpr Eigen::Index kDefaultDenseLimit = 5000;

// Dense symmetric eigendecomposition. Sign convention: the first entry of
// each eigenvector with |entry| > 1e-12 is positive.
SpectralBasis eigendecompose(const Laplacian& laplacian,
                             Eigen::Index dense_limit = kDefaultDenseLimit);

Eigen::VectorXd gft(const SpectralBasis& basis, const Eigen::VectorXd& signal);
Eigen::VectorXd igft(const SpectralBasis& basis, const Eigen::VectorXd& coeffs);

// Orthogonal projection onto span of the first rho eigenvectors.
Eigen::VectorXd project_bandlimited(const SpectralBasis& basis,
                                    const Eigen::VectorXd& signal,
                                    Eigen::Index rho);

// True iff all spectral coefficients past rho are within tol of zero.
bool is_bandlimited(const SpectralBasis& basis, const Eigen::VectorXd& signal,
                    Eigen::Index rho, double tol);

}  // namespace graphbgs
