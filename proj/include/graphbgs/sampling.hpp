#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "graphbgs/graph.hpp"
#include "graphbgs/spectral.hpp"

namespace graphbgs {

/// Ordered subset of node indices; implies the binary decimation operator
/// that keeps rows s_1 ... s_m in that order.
struct SamplingSet {
  std::vector<int> indices;

  std::size_t size() const { return indices.size(); }

  // Throws DataError on duplicates or out-of-range entries.
  void validate(Eigen::Index n_nodes) const;
};

struct RankCheck {
  bool ok = false;
  double sigma_min = 0.0;
};

Eigen::VectorXd decimate(const Eigen::VectorXd& signal, const SamplingSet& set);
Eigen::MatrixXd decimate_rows(const Eigen::MatrixXd& signal,
                              const SamplingSet& set);

// True iff the decimated leading eigenvector block has full column rank rho
// (smallest singular value > 1e-10).
RankCheck verify_sampling_rank(const SpectralBasis& basis,
                               const SamplingSet& set, Eigen::Index rho);

// Exact recovery of rho-bandlimited signals from their samples via the
// pseudo-inverse interpolation operator. Throws NumericalError when the
// sampling set cannot resolve the band.
Eigen::VectorXd chen_recover(const SpectralBasis& basis, const SamplingSet& set,
                             const Eigen::VectorXd& sampled_values,
                             Eigen::Index rho);

// Regularized least-squares recovery with penalty eta * z^T g(L) z and
// diagonal data weighting. g is given by its polynomial coefficients
// (g_coeffs[k] multiplies lambda^k) and must be nonnegative on the spectrum.
Eigen::VectorXd puy_recover(const Laplacian& laplacian, const SamplingSet& set,
                            const Eigen::VectorXd& sampled_values, double eta,
                            const std::vector<double>& g_coeffs,
                            const Eigen::VectorXd& p_diag);

// Convenience overload: g(lambda) = lambda, P = I.
Eigen::VectorXd puy_recover(const Laplacian& laplacian, const SamplingSet& set,
                            const Eigen::VectorXd& sampled_values, double eta);

// Uniform sampling without replacement, ceil(density * N) nodes, sorted.
SamplingSet sample_uniform(Eigen::Index n_nodes, double density,
                           std::uint64_t seed);

}  // namespace graphbgs
