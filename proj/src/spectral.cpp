#include "graphbgs/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "graphbgs/errors.hpp"

namespace graphbgs {

SpectralBasis eigendecompose(const Laplacian& laplacian,
                             Eigen::Index dense_limit) {
  const Eigen::Index n = laplacian.n();
  if (n > dense_limit)
    throw ConfigError(
        "graph with " + std::to_string(n) +
        " nodes exceeds the dense eigensolve limit " +
        std::to_string(dense_limit) +
        "; use the iterative solver / eigendecomposition-free paths");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian.dense());
  if (es.info() != Eigen::Success)
    throw NumericalError("eigendecomposition failed to converge");
  SpectralBasis basis;
  basis.eigenvalues = es.eigenvalues();
  basis.eigenvectors = es.eigenvectors();
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const double v = basis.eigenvectors(r, c);
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) basis.eigenvectors.col(c) = -basis.eigenvectors.col(c);
        break;
      }
    }
  }
  return basis;
}

Eigen::VectorXd gft(const SpectralBasis& basis, const Eigen::VectorXd& signal) {
  if (signal.size() != basis.n())
    throw DataError("gft: signal length does not match basis size");
  return basis.eigenvectors.transpose() * signal;
}

Eigen::VectorXd igft(const SpectralBasis& basis,
                     const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != basis.n())
    throw DataError("igft: coefficient length does not match basis size");
  return basis.eigenvectors * coeffs;
}

Eigen::VectorXd project_bandlimited(const SpectralBasis& basis,
                                    const Eigen::VectorXd& signal,
                                    Eigen::Index rho) {
  if (rho < 1 || rho > basis.n())
    throw ConfigError("project_bandlimited: rho out of range");
  if (signal.size() != basis.n())
    throw DataError("project_bandlimited: signal length mismatch");
  const auto u = basis.eigenvectors.leftCols(rho);
  return u * (u.transpose() * signal);
}

bool is_bandlimited(const SpectralBasis& basis, const Eigen::VectorXd& signal,
                    Eigen::Index rho, double tol) {
  if (tol < 0.0) throw ConfigError("is_bandlimited: tol must be >= 0");
  if (rho >= basis.n()) return true;
  const Eigen::VectorXd coeffs = gft(basis, signal);
  return coeffs.tail(basis.n() - rho).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace graphbgs
