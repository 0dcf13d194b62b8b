#pragma once

// Reference computations that deliberately avoid the library's closed forms. They are slower and
// only meant for small universes, so they can arbitrate whether the fast paths are right.

#include <cstdint>
#include <span>
#include <vector>

#include "ttsim/measures.hpp"
#include "ttsim/samplers.hpp"

namespace ttsim::oracle {

struct ChiBallOptimum {
  double set_mass = 0.0;
  double chi2 = 0.0;
  double lambda = 0.0;  // multiplier of the chi-squared constraint (0 when it is slack)
  std::vector<double> nu;
};

// max sum_{i in set} nu_i  s.t.  nu in the simplex, sum nu_i^2 / mu_i <= beta.
// For a multiplier lambda the Lagrangian maximiser over the simplex is found by bisection on the
// simplex multiplier; lambda itself is then bisected (in log space) until the constraint is active.
ChiBallOptimum maximize_set_mass(std::span<const double> mu, const std::vector<bool>& in_set, double beta);

// 0.5 * sum |p - q| by direct summation.
double total_variation(std::span<const double> p, std::span<const double> q);

// Walks every ordered (N+1)-tuple of atoms and applies the BoN selection rule.
std::vector<double> enumerate_bon(const ResponseUniverse& u, const VerifierSet& s_hat, std::int64_t n,
                                  BonInspection inspection = BonInspection::AllResponses);

// Walks every accept/reject history of BRS with the SRS acceptance probabilities for (s_eff, beta).
std::vector<double> enumerate_brs(const ResponseUniverse& u, const VerifierSet& s_hat, double s_eff, double beta,
                                  std::int64_t n);

// Chi-squared goodness-of-fit p-value of observed counts against expected probabilities.
// Atoms with zero expected probability must have zero count (otherwise p = 0).
double gof_p_value(std::span<const std::uint64_t> counts, std::span<const double> probs);

}  // namespace ttsim::oracle
