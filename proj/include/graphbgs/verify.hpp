#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace graphbgs {

struct SuiteResult {
  std::string name;
  int instances = 0;
  int failures = 0;
  std::string detail;

  bool ok() const { return failures == 0 && instances > 0; }
};

// Perfect recovery of bandlimited signals from rank-valid sampling sets.
SuiteResult verify_chen_recovery(std::uint64_t seed, int instances = 100);

// Condition-number sandwich for L + Psi, with bound equality for Psi = eps*I
// on connected graphs.
SuiteResult verify_condition_bounds(std::uint64_t seed, int instances = 200);

// Eigenvalue sandwich for L + Psi, with shift exactness for Psi = eps*I.
SuiteResult verify_weyl(std::uint64_t seed, int instances = 200);

// Closed-form vs conjugate-gradient solver agreement on random graphs.
SuiteResult verify_solver_agreement(std::uint64_t seed, int instances = 20);

// Closed-form objective beats random feasible interpolants.
SuiteResult verify_solver_optimality(std::uint64_t seed, int instances = 20,
                                     int interpolants = 100);

// Induced-norm inequality, smallest-singular-value bound, and monotonicity
// of the condition number in eps.
SuiteResult verify_norm_lemmas(std::uint64_t seed, int instances = 20);

// Parseval identity, Rayleigh quotients, and projection idempotence.
SuiteResult verify_spectral(std::uint64_t seed, int instances = 50);

std::vector<SuiteResult> verify_all(std::uint64_t seed);

}  // namespace graphbgs
