#include "ttsim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ttsim/errors.hpp"

namespace ttsim {

namespace {

void require_open(double s, const char* what) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must lie in (0,1)");
}

void require_half_open(double s, const char* what) {
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must lie in (0,1]");
}

void require_count(std::int64_t n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "batch size N must be >= 0");
}

void require_envelope(double m_env) {
  if (!std::isfinite(m_env) || m_env < 1.0) throw Error(ErrorKind::InvalidArgument, "envelope M must be >= 1");
}

void require_j(double j) {
  if (!(j >= -1.0 && j <= 1.0)) throw Error(ErrorKind::InvalidArgument, "Youden J must lie in [-1,1]");
}

double ipow(double base, std::int64_t n) { return std::pow(base, static_cast<double>(n)); }

}  // namespace

double aic_complexity(double s_ver) {
  if (s_ver == 0.0) throw Error(ErrorKind::NeverTerminates, "AiC never terminates when the verifier set has no mass");
  require_half_open(s_ver, "s_ver");
  return 1.0 / s_ver;
}

double aic_subopt(double s, double s_ver, double j, CoverageBudget beta) {
  require_open(s, "s");
  require_half_open(s_ver, "s_ver");
  require_j(j);
  const double b = beta.value();
  const double cost = otc(s, beta);
  if (b > 1.0 / s) return cost * (1.0 - (s / s_ver) * j);
  if (b > 1.0) return cost * (1.0 - (1.0 / s_ver) * std::sqrt(s * (1.0 - s) / (b - 1.0)) * j);
  // beta = 1: the cost vanishes but the J-term does not; this is the limit of the branch above.
  return -s * (1.0 - s) * j / s_ver;
}

CoverageBudget aic_min_beta(double s_ver) {
  require_half_open(s_ver, "s_ver");
  return CoverageBudget(1.0 / s_ver);
}

double srs_smc_complexity(double s_ver, CoverageBudget beta) {
  require_half_open(s_ver, "s_ver");
  return std::min(1.0, m_beta(s_ver, beta)) / s_ver;
}

TheoryPrediction srs_smc_subopt(double s, double s_ver, double j, CoverageBudget beta) {
  require_j(j);
  const Regime regime = regime_of(s, s_ver, beta);
  const double b = beta.value();
  double alpha = 0.0;
  switch (regime.tag) {
    case RegimeTag::Transport:
      alpha = std::sqrt(s * (1.0 - s) / (s_ver * (1.0 - s_ver)));
      break;
    case RegimeTag::PolicyImprovement:
      if (*regime.sub_case == PolicyImprovementCase::VerifierHeavier)
        alpha = (1.0 / s_ver) * std::sqrt(s * (1.0 - s) / (b - 1.0));
      else
        alpha = s * std::sqrt((b - 1.0) / (s_ver * (1.0 - s_ver)));
      break;
    case RegimeTag::Saturation:
      alpha = s / s_ver;
      break;
  }
  TheoryPrediction p;
  p.subopt = otc(s, beta) * (1.0 - alpha * j);
  p.expected_proposals = srs_smc_complexity(s_ver, beta);
  p.alpha = alpha;
  p.regime = regime;
  return p;
}

BatchLimit bon_max_batch(double s, CoverageBudget beta, BonBatchRule rule) {
  require_open(s, "s");
  // Under the literal reading the thresholds apply to beta itself, under the chi-squared reading
  // to the ball radius beta - 1 (the proof shows chi2(N) = ((1-s)/s)(1-(1-s)^N)^2, with chi2(1) = s(1-s)).
  const double x = rule == BonBatchRule::Literal ? beta.value() : beta.radius();
  const double upper = (1.0 - s) / s;
  const double lower = s * (1.0 - s);
  BatchLimit out;
  if (x >= upper) {
    out.kind = BatchLimit::Kind::Infinite;
    return out;
  }
  const bool finite = rule == BonBatchRule::Literal ? x > lower : x >= lower;
  if (!finite) {
    out.kind = BatchLimit::Kind::Undetermined;
    return out;
  }
  out.kind = BatchLimit::Kind::Finite;
  out.value = std::log1p(-std::sqrt(beta.radius() * s / (1.0 - s))) / std::log1p(-s);
  // The nudge keeps an exact integer bound (e.g. radius = s(1-s) gives 1) from flooring down by rounding.
  out.floored = static_cast<std::int64_t>(std::floor(out.value + 1e-9));
  return out;
}

double bon_subopt_exact(double s, CoverageBudget beta, std::int64_t n) {
  require_open(s, "s");
  require_count(n);
  return ipow(1.0 - s, n + 1) - std::max(0.0, 1.0 - m_beta(s, beta));
}

double brs_subopt_exact(double s, CoverageBudget beta, std::int64_t n, double m_env) {
  require_open(s, "s");
  require_count(n);
  require_envelope(m_env);
  return otc(s, beta) * ipow(1.0 - 1.0 / m_env, n);
}

double bon_subopt_approx(double s, double s_ver, double j, CoverageBudget beta, std::int64_t n) {
  require_open(s, "s");
  require_open(s_ver, "s_ver");
  require_j(j);
  require_count(n);
  const double found = 1.0 - ipow(1.0 - s_ver, n);
  return (1.0 - s) * (1.0 - (s / s_ver) * found * j) - std::max(0.0, 1.0 - m_beta(s, beta));
}

double brs_subopt_approx(double s, double s_ver, double tpr, CoverageBudget beta, std::int64_t n, double m_env) {
  require_count(n);
  require_envelope(m_env);
  if (!(tpr >= 0.0 && tpr <= 1.0)) throw Error(ErrorKind::InvalidArgument, "TPR must lie in [0,1]");
  const Regime regime = regime_of(s, s_ver, beta);
  const double a_n = 1.0 - ipow(1.0 - 1.0 / m_env, n);
  const double m_s = m_beta(s, beta);
  const double m_v = m_beta(s_ver, beta);
  // Mass that the verifier-tilted density puts on S* when the verifier side is still transporting.
  const double tilted_hit = s * (tpr * m_v / s_ver + (1.0 - tpr) * (1.0 - m_v) / (1.0 - s_ver));
  const double saturated_hit = s * tpr / s_ver;
  double bracket = 0.0;
  switch (regime.tag) {
    case RegimeTag::Transport:
      bracket = m_s - tilted_hit;
      break;
    case RegimeTag::PolicyImprovement:
      bracket = *regime.sub_case == PolicyImprovementCase::VerifierHeavier ? m_s - saturated_hit : 1.0 - tilted_hit;
      break;
    case RegimeTag::Saturation:
      bracket = 1.0 - saturated_hit;
      break;
  }
  return otc(s, beta) * (1.0 - a_n) + a_n * bracket;
}

DensityPair bon_rn_derivative(double s, std::int64_t n) {
  require_open(s, "s");
  require_count(n);
  return {(1.0 - ipow(1.0 - s, n + 1)) / s, ipow(1.0 - s, n)};
}

DensityPair brs_rn_derivative(double eta_on, double eta_off, double m_env, std::int64_t n) {
  require_envelope(m_env);
  require_count(n);
  const double w = ipow(1.0 - 1.0 / m_env, n);
  return {(1.0 - w) * eta_on + w, (1.0 - w) * eta_off + w};
}

double bon_chi_squared(double s, std::int64_t n) {
  require_open(s, "s");
  require_count(n);
  const double gap = 1.0 - ipow(1.0 - s, n);
  return (1.0 - s) / s * gap * gap;
}

}  // namespace ttsim
