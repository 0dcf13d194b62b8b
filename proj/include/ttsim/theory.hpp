#pragma once

#include <cstdint>
#include <optional>

#include "ttsim/transport.hpp"

namespace ttsim {

struct TheoryPrediction {
  double subopt = 0.0;
  std::optional<double> expected_proposals;  // absent for batched algorithms
  std::optional<double> alpha;               // J-multiplier for the sequential samplers
  std::optional<Regime> regime;
};

struct DensityPair {
  double on_value = 1.0;
  double off_value = 1.0;
};

double aic_complexity(double s_ver);
double aic_subopt(double s, double s_ver, double j, CoverageBudget beta);
CoverageBudget aic_min_beta(double s_ver);

double srs_smc_complexity(double s_ver, CoverageBudget beta);
TheoryPrediction srs_smc_subopt(double s, double s_ver, double j, CoverageBudget beta);

// How the BoN admissibility cases are read. Literal applies the theorem's inequalities on beta
// verbatim; ChiSquare compares beta-1 against the chi-squared values the proof derives.
enum class BonBatchRule { Literal, ChiSquare };

struct BatchLimit {
  enum class Kind { Infinite, Finite, Undetermined };
  Kind kind = Kind::Infinite;
  double value = 0.0;       // un-floored real bound, Finite only
  std::int64_t floored = 0;  // Finite only
};

BatchLimit bon_max_batch(double s, CoverageBudget beta, BonBatchRule rule = BonBatchRule::Literal);

double bon_subopt_exact(double s, CoverageBudget beta, std::int64_t n);
double brs_subopt_exact(double s, CoverageBudget beta, std::int64_t n, double m_env);
double bon_subopt_approx(double s, double s_ver, double j, CoverageBudget beta, std::int64_t n);
double brs_subopt_approx(double s, double s_ver, double tpr, CoverageBudget beta, std::int64_t n, double m_env);

DensityPair bon_rn_derivative(double s, std::int64_t n);
DensityPair brs_rn_derivative(double eta_on, double eta_off, double m_env, std::int64_t n);
double bon_chi_squared(double s, std::int64_t n);

}  // namespace ttsim
