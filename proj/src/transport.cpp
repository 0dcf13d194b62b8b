#include "ttsim/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ttsim/errors.hpp"

namespace ttsim {

namespace {

void require_probability(double s, const char* what) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must lie in [0,1]");
}

void require_open_probability(double s, const char* what) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must lie in (0,1)");
}

}  // namespace

CoverageBudget::CoverageBudget(double beta) : beta_(beta) {
  if (!std::isfinite(beta) || beta < 1.0)
    throw Error(ErrorKind::InvalidArgument, "coverage budget beta must be finite and >= 1 (got " +
                                                std::to_string(beta) + ")");
}

double m_beta(double s, CoverageBudget beta) {
  require_probability(s, "set mass s");
  return s + std::sqrt(s * (1.0 - s) * beta.radius());
}

TiltedDensity tilted_density(double s, CoverageBudget beta) {
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorKind::DegenerateSet, "set mass must lie in (0,1]");
  TiltedDensity d;
  d.m = m_beta(s, beta);
  if (s == 1.0) {
    // The off-set ratio is 0/0 here; the set already carries all the mass, so nothing goes off it.
    d.on_value = 1.0;
    d.off_value = 0.0;
    return d;
  }
  d.on_value = std::min(1.0 / s, d.m / s);
  d.off_value = std::max(0.0, (1.0 - d.m) / (1.0 - s));
  return d;
}

TiltedPolicy optimal_policy(const ResponseUniverse& u, const VerifierSet& set, CoverageBudget beta) {
  const double s = mass(u, set);
  if (!(s > 0.0 && s < 1.0))
    throw Error(ErrorKind::DegenerateSet, "optimal policy needs a set with mass strictly between 0 and 1");
  const TiltedDensity d = tilted_density(s, beta);
  TiltedPolicy p;
  p.on_value = d.on_value;
  p.off_value = d.off_value;
  p.m = d.on_value * s;
  p.set = set;
  p.distribution.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    p.distribution[i] = (set.contains(i) ? d.on_value : d.off_value) * u.prob(i);
  return p;
}

double chi_squared(const ResponseUniverse& u, std::span<const double> candidate) {
  if (candidate.size() != u.size())
    throw Error(ErrorKind::InvalidArgument, "candidate distribution has the wrong number of atoms");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double nu = candidate[i];
    if (!std::isfinite(nu) || nu < 0.0) throw Error(ErrorKind::InvalidArgument, "candidate has a negative entry");
    const double mu = u.prob(i);
    if (mu == 0.0) {
      if (nu > 0.0)
        throw Error(ErrorKind::AbsoluteContinuity, "candidate charges '" + u.id(i) + "', which has zero proposal mass");
      continue;
    }
    acc += nu * nu / mu;
  }
  return std::max(0.0, acc - 1.0);
}

double otc(double s, CoverageBudget beta) {
  require_probability(s, "set mass s");
  return std::min(1.0, m_beta(s, beta)) - s;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorKind::InvalidArgument, "distributions differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

Regime regime_of(double s, double s_ver, CoverageBudget beta) {
  require_open_probability(s, "ground-truth mass s");
  require_open_probability(s_ver, "verifier mass s_ver");
  Regime r;
  r.lower = std::min(1.0 / s, 1.0 / s_ver);
  r.upper = std::max(1.0 / s, 1.0 / s_ver);
  const double b = beta.value();
  if (b <= r.lower) {
    r.tag = RegimeTag::Transport;
  } else if (b > r.upper) {
    r.tag = RegimeTag::Saturation;
  } else {
    r.tag = RegimeTag::PolicyImprovement;
    r.sub_case = s_ver > s ? PolicyImprovementCase::VerifierHeavier : PolicyImprovementCase::VerifierLighter;
  }
  return r;
}

std::string to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Transport: return "transport";
    case RegimeTag::PolicyImprovement: return "policy-improvement";
    case RegimeTag::Saturation: return "saturation";
  }
  return "unknown";
}

std::string to_string(const Regime& regime) {
  std::string out = to_string(regime.tag);
  if (regime.sub_case) out += *regime.sub_case == PolicyImprovementCase::VerifierHeavier ? "-a" : "-b";
  return out;
}

double envelope_m(double s_ver, CoverageBudget beta) {
  const TiltedDensity d = tilted_density(s_ver, beta);
  return std::max(d.on_value, d.off_value);
}

}  // namespace ttsim
