#include "graphbgs/sampling.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include "graphbgs/errors.hpp"

namespace graphbgs {

void SamplingSet::validate(Eigen::Index n_nodes) const {
  if (indices.empty()) throw DataError("sampling set is empty");
  std::unordered_set<int> seen;
  for (int s : indices) {
    if (s < 0 || s >= n_nodes)
      throw DataError("sampling index " + std::to_string(s) + " out of range");
    if (!seen.insert(s).second)
      throw DataError("duplicate sampling index " + std::to_string(s));
  }
}

Eigen::VectorXd decimate(const Eigen::VectorXd& signal,
                         const SamplingSet& set) {
  set.validate(signal.size());
  Eigen::VectorXd out(static_cast<Eigen::Index>(set.size()));
  for (std::size_t j = 0; j < set.size(); ++j) out(j) = signal(set.indices[j]);
  return out;
}

Eigen::MatrixXd decimate_rows(const Eigen::MatrixXd& signal,
                              const SamplingSet& set) {
  set.validate(signal.rows());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(set.size()), signal.cols());
  for (std::size_t j = 0; j < set.size(); ++j)
    out.row(j) = signal.row(set.indices[j]);
  return out;
}

RankCheck verify_sampling_rank(const SpectralBasis& basis,
                               const SamplingSet& set, Eigen::Index rho) {
  set.validate(basis.n());
  if (rho < 1 || rho > basis.n())
    throw ConfigError("verify_sampling_rank: rho out of range");
  const Eigen::MatrixXd mu =
      decimate_rows(basis.leading(rho), set);  // m x rho
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mu);
  RankCheck check;
  check.sigma_min = static_cast<Eigen::Index>(set.size()) < rho
                        ? 0.0
                        : svd.singularValues().minCoeff();
  check.ok = check.sigma_min > 1e-10;
  return check;
}

Eigen::VectorXd chen_recover(const SpectralBasis& basis, const SamplingSet& set,
                             const Eigen::VectorXd& sampled_values,
                             Eigen::Index rho) {
  if (sampled_values.size() != static_cast<Eigen::Index>(set.size()))
    throw DataError("chen_recover: sampled value count mismatch");
  const RankCheck check = verify_sampling_rank(basis, set, rho);
  if (!check.ok)
    throw NumericalError(
        "chen_recover: sampling set cannot resolve bandwidth " +
        std::to_string(rho) + " (sigma_min = " +
        std::to_string(check.sigma_min) + ")");
  const Eigen::MatrixXd u_rho = basis.leading(rho);
  const Eigen::MatrixXd mu = decimate_rows(u_rho, set);
  // rank-revealing pseudo-inverse
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(mu);
  return u_rho * cod.solve(sampled_values);
}

Eigen::VectorXd puy_recover(const Laplacian& laplacian, const SamplingSet& set,
                            const Eigen::VectorXd& sampled_values, double eta,
                            const std::vector<double>& g_coeffs,
                            const Eigen::VectorXd& p_diag) {
  const Eigen::Index n = laplacian.n();
  set.validate(n);
  if (sampled_values.size() != static_cast<Eigen::Index>(set.size()))
    throw DataError("puy_recover: sampled value count mismatch");
  if (!(eta > 0.0)) throw ConfigError("puy_recover: eta must be > 0");
  if (p_diag.size() != static_cast<Eigen::Index>(set.size()))
    throw DataError("puy_recover: P diagonal must have one entry per sample");
  if ((p_diag.array() <= 0.0).any())
    throw ConfigError("puy_recover: P diagonal entries must be > 0");
  for (double c : g_coeffs)
    if (c < 0.0)
      throw ConfigError("puy_recover: g coefficients must be nonnegative");

  // g(L) by Horner on the sparse Laplacian
  Eigen::SparseMatrix<double> identity(n, n);
  identity.setIdentity();
  Eigen::SparseMatrix<double> g_of_l(n, n);
  if (g_coeffs.empty()) {
    g_of_l.setZero();
  } else {
    g_of_l = g_coeffs.back() * identity;
    for (auto it = g_coeffs.rbegin() + 1; it != g_coeffs.rend(); ++it) {
      g_of_l = (g_of_l * laplacian.matrix).pruned();
      g_of_l += *it * identity;
    }
  }

  // M^T P^-1 M is diagonal with 1/p at sampled nodes
  Eigen::SparseMatrix<double> system = eta * g_of_l;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t j = 0; j < set.size(); ++j) {
    const int s = set.indices[j];
    system.coeffRef(s, s) += 1.0 / p_diag(j);
    rhs(s) += sampled_values(j) / p_diag(j);
  }
  system.makeCompressed();

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(system);
  if (solver.info() != Eigen::Success)
    throw NumericalError("puy_recover: system factorization failed "
                         "(regularizer null space hits unsampled nodes?)");
  const Eigen::VectorXd result = solver.solve(rhs);
  const double residual = (system * result - rhs).norm();
  const double scale = rhs.norm();
  if (scale > 0.0 && residual > 1e-8 * scale)
    throw NumericalError("puy_recover: residual too large: " +
                         std::to_string(residual));
  return result;
}

Eigen::VectorXd puy_recover(const Laplacian& laplacian, const SamplingSet& set,
                            const Eigen::VectorXd& sampled_values, double eta) {
  return puy_recover(laplacian, set, sampled_values, eta, {0.0, 1.0},
                     Eigen::VectorXd::Ones(
                         static_cast<Eigen::Index>(set.indices.size())));
}

SamplingSet sample_uniform(Eigen::Index n_nodes, double density,
                           std::uint64_t seed) {
  if (!(density > 0.0) || density > 1.0)
    throw ConfigError("sample_uniform: density must be in (0, 1]");
  const auto m = static_cast<Eigen::Index>(
      std::ceil(density * static_cast<double>(n_nodes)));
  if (m < 1) throw ConfigError("sample_uniform: empty sample");
  std::vector<int> pool(static_cast<std::size_t>(n_nodes));
  std::iota(pool.begin(), pool.end(), 0);
  std::mt19937_64 rng(seed);
  // partial Fisher-Yates
  for (Eigen::Index i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(
        static_cast<std::size_t>(i), pool.size() - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng)]);
  }
  SamplingSet set;
  set.indices.assign(pool.begin(), pool.begin() + m);
  std::sort(set.indices.begin(), set.indices.end());
  return set;
}

}  // namespace graphbgs
