#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttsim/measures.hpp"

namespace ttsim {

// Radius of the chi-squared ball around mu. Rejects beta < 1 instead of clamping.
class CoverageBudget {
 public:
  explicit CoverageBudget(double beta);
  double value() const noexcept { return beta_; }
  // Ball radius beta - 1.
  double radius() const noexcept { return beta_ - 1.0; }

 private:
  double beta_;
};

// Two-level density of the optimal policy: a constant ratio on the set and another off it.
struct TiltedDensity {
  double on_value = 1.0;
  double off_value = 1.0;
  double m = 0.0;  // unclipped m_beta(s)
};

// s + sqrt(s(1-s)(beta-1)), deliberately not clipped at 1.
double m_beta(double s, CoverageBudget beta);

// The optimal-policy density ratios for set mass s in (0,1]. At s = 1 the off-set value is 0.
TiltedDensity tilted_density(double s, CoverageBudget beta);

struct TiltedPolicy {
  double on_value = 1.0;
  double off_value = 1.0;
  double m = 0.0;  // mass the policy places on the set
  VerifierSet set;
  std::vector<double> distribution;  // nu(y) = eta(y) mu(y), aligned with the universe ids
};

TiltedPolicy optimal_policy(const ResponseUniverse& u, const VerifierSet& set, CoverageBudget beta);

// sum nu^2/mu - 1; throws when the candidate charges a mu-null atom.
double chi_squared(const ResponseUniverse& u, std::span<const double> candidate);

double otc(double s, CoverageBudget beta);

double total_variation(std::span<const double> p, std::span<const double> q);

enum class RegimeTag { Transport, PolicyImprovement, Saturation };

// (a): s_ver > s, (b): s_ver <= s.
enum class PolicyImprovementCase { VerifierHeavier, VerifierLighter };

struct Regime {
  RegimeTag tag = RegimeTag::Transport;
  std::optional<PolicyImprovementCase> sub_case;
  double lower = 1.0;  // min(1/s, 1/s_ver)
  double upper = 1.0;  // max(1/s, 1/s_ver)
};

Regime regime_of(double s, double s_ver, CoverageBudget beta);

std::string to_string(RegimeTag tag);
// "transport", "policy-improvement-a", "policy-improvement-b" or "saturation".
std::string to_string(const Regime& regime);

double envelope_m(double s_ver, CoverageBudget beta);

}  // namespace ttsim
